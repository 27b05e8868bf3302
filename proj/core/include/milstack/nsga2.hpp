#ifndef MILSTACK_NSGA2_HPP
#define MILSTACK_NSGA2_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "milstack/cnn.hpp"
#include "milstack/parallel.hpp"
#include "milstack/pareto.hpp"
#include "milstack/rng.hpp"
#include "milstack/types.hpp"

namespace milstack {

// Search settings shared by both optimization stages. eta_max and d_max only
// constrain the CNN genome; the stacking stage ignores them.
struct GaConfig {
    int population = 100;
    int generations = 100;
    double crossover_prob = 0.9;
    double mutation_prob = 0.1;  // per scalar gene; mask bits always use 1/m
    int eta_max = 15;
    int d_max = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

// Candidate CNN classifier as searched by the GA. Bounds: eta genes in
// [1, eta_max], d in [1, d_max], theta in [0.05, 0.95], mask non-empty.
struct CnnGenome {
    int eta_r = 1;
    int eta_c = 1;
    int d = 1;
    double theta = 0.5;
    std::vector<std::uint8_t> feature_mask;  // one 0/1 per coordinate

    bool operator==(const CnnGenome& other) const = default;
};

// Canonical packed encoding; used as the memo/dedup key.
using GenomeKey = std::vector<std::uint64_t>;

GenomeKey encode_genome(const CnnGenome& genome);
CnnGenome decode_genome(const GenomeKey& key, std::size_t dimensionality);

// Genome -> classifier parameters for a training set of N bags. Neighbourhood
// sizes are clamped to N-2 so every leave-one-out fold (training on N-1 bags)
// stays within 1 <= eta <= T-1.
CnnParams decode_to_params(const CnnGenome& genome, std::size_t train_bag_count);

struct KeyHash {
    std::size_t operator()(const GenomeKey& key) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : key) {
            h ^= static_cast<std::size_t>(w);
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

// Objective memo keyed by the canonical genome encoding; a repeated genome is
// never re-evaluated.
class FitnessMemo {
public:
    const Objectives* find(const GenomeKey& key) const {
        auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }
    void insert(GenomeKey key, Objectives value) { map_.emplace(std::move(key), value); }
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<GenomeKey, Objectives, KeyHash> map_;
};

// Leave-one-out objectives (Acc+, Acc-) for one genome, served from the memo
// when the same genome was evaluated before.
Objectives evaluate_genome(const Dataset& train, const CnnGenome& genome, FitnessMemo& memo,
                           unsigned jobs = 1);

struct FrontMember {
    CnnParams params;
    CnnGenome genome;
    double acc_pos = 0.0;
    double acc_neg = 0.0;
};

struct ParetoFront {
    std::vector<FrontMember> members;

    bool empty() const { return members.empty(); }
    std::size_t size() const { return members.size(); }
    std::vector<Objectives> objectives() const {
        std::vector<Objectives> out;
        out.reserve(members.size());
        for (const FrontMember& m : members) out.emplace_back(m.acc_pos, m.acc_neg);
        return out;
    }
};

// NSGA-II over CNN genomes, maximizing the LOO (Acc+, Acc-) estimates.
// Fully deterministic given config.seed; objective evaluations may run on
// `jobs` threads without affecting the result. Returns the final rank-0
// front, deduplicated by genome.
ParetoFront evolve(const Dataset& train, const GaConfig& config, unsigned jobs = 1,
                   std::vector<std::pair<double, double>>* best_by_generation = nullptr);

// ---------------------------------------------------------------------------
// Generic engine, shared by the CNN stage and the stacking stage. A Problem
// supplies:
//   using Genome = ...;
//   std::vector<Genome> initial_population(std::size_t, Rng&) const;
//   std::pair<Genome, Genome> crossover(const Genome&, const Genome&, Rng&) const;
//   void mutate(Genome&, Rng&) const;
//   GenomeKey key(const Genome&) const;
//   Objectives evaluate(const Genome&) const;   // thread-safe
// Selection and variation consume the sequential seeded stream; only
// evaluation is parallel, so results do not depend on `jobs`.
// ---------------------------------------------------------------------------

template <typename Problem>
struct SearchOutcome {
    struct Member {
        typename Problem::Genome genome;
        Objectives objectives;
    };
    std::vector<Member> front;  // rank-0, deduplicated by key
    std::vector<std::pair<double, double>> best_by_generation;
};

namespace detail {

// SBX crossover (distribution index 15) and polynomial mutation (index 20)
// for one real gene, both clamped to [lo, hi].
std::pair<double, double> sbx_pair(double a, double b, double lo, double hi, Rng& rng);
double polynomial_mutate(double x, double lo, double hi, Rng& rng);

struct RankedIndex {
    std::size_t rank = 0;
    double crowding = 0.0;
};

// rank ascending, then crowding descending, then index for stability
inline bool ranked_before(const RankedIndex& a, const RankedIndex& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.crowding > b.crowding;
}

}  // namespace detail

template <typename Problem>
SearchOutcome<Problem> nsga2_search(const Problem& problem, const GaConfig& config,
                                    unsigned jobs) {
    using Genome = typename Problem::Genome;
    config.validate();

    Rng rng(config.seed);
    const std::size_t pop_size = static_cast<std::size_t>(config.population);

    std::vector<Genome> population = problem.initial_population(pop_size, rng);

    std::unordered_map<GenomeKey, Objectives, KeyHash> memo;

    // Evaluates any genomes missing from the memo, in parallel, then reads
    // every objective back out. Values never depend on evaluation order.
    auto evaluate_all = [&](const std::vector<Genome>& genomes) {
        std::vector<GenomeKey> keys(genomes.size());
        for (std::size_t i = 0; i < genomes.size(); ++i) keys[i] = problem.key(genomes[i]);

        std::vector<std::size_t> misses;
        for (std::size_t i = 0; i < genomes.size(); ++i) {
            if (memo.find(keys[i]) == memo.end()) {
                bool queued = false;
                for (std::size_t j : misses)
                    if (keys[j] == keys[i]) { queued = true; break; }
                if (!queued) misses.push_back(i);
            }
        }
        std::vector<Objectives> fresh(misses.size());
        parallel_for(misses.size(), jobs,
                     [&](std::size_t k) { fresh[k] = problem.evaluate(genomes[misses[k]]); });
        for (std::size_t k = 0; k < misses.size(); ++k) memo.emplace(keys[misses[k]], fresh[k]);

        std::vector<Objectives> out(genomes.size());
        for (std::size_t i = 0; i < genomes.size(); ++i) out[i] = memo.at(keys[i]);
        return out;
    };

    std::vector<Objectives> objectives = evaluate_all(population);

    // per-individual rank and crowding for tournament selection
    std::vector<detail::RankedIndex> ranked(pop_size);
    auto rank_population = [&](const std::vector<Objectives>& objs,
                               std::vector<detail::RankedIndex>& out) {
        out.assign(objs.size(), {});
        auto fronts = fast_nondominated_sort(objs);
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            auto crowd = crowding_distance(objs, fronts[f]);
            for (std::size_t i = 0; i < fronts[f].size(); ++i) {
                out[fronts[f][i]].rank = f;
                out[fronts[f][i]].crowding = crowd[i];
            }
        }
        return fronts;
    };
    rank_population(objectives, ranked);

    SearchOutcome<Problem> outcome;
    auto record_best = [&]() {
        double best_pos = 0.0, best_neg = 0.0;
        for (const auto& [pos, neg] : objectives) {
            best_pos = std::max(best_pos, pos);
            best_neg = std::max(best_neg, neg);
        }
        outcome.best_by_generation.emplace_back(best_pos, best_neg);
    };
    record_best();

    auto tournament = [&](std::size_t a, std::size_t b) {
        if (detail::ranked_before(ranked[a], ranked[b])) return a;
        if (detail::ranked_before(ranked[b], ranked[a])) return b;
        return rng.next_bool(0.5) ? a : b;
    };

    for (int gen = 0; gen < config.generations; ++gen) {
        // variation: binary tournaments feed crossover + mutation
        std::vector<Genome> offspring;
        offspring.reserve(pop_size);
        while (offspring.size() < pop_size) {
            std::size_t p1 = tournament(rng.next_index(pop_size), rng.next_index(pop_size));
            std::size_t p2 = tournament(rng.next_index(pop_size), rng.next_index(pop_size));
            Genome c1 = population[p1];
            Genome c2 = population[p2];
            if (rng.next_bool(config.crossover_prob)) {
                auto pair = problem.crossover(population[p1], population[p2], rng);
                c1 = std::move(pair.first);
                c2 = std::move(pair.second);
            }
            problem.mutate(c1, rng);
            problem.mutate(c2, rng);
            offspring.push_back(std::move(c1));
            if (offspring.size() < pop_size) offspring.push_back(std::move(c2));
        }
        std::vector<Objectives> offspring_objs = evaluate_all(offspring);

        // elitist environmental selection over parents + offspring
        std::vector<Genome> combined = std::move(population);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
        std::vector<Objectives> combined_objs = std::move(objectives);
        combined_objs.insert(combined_objs.end(), offspring_objs.begin(), offspring_objs.end());

        auto fronts = fast_nondominated_sort(combined_objs);
        std::vector<std::size_t> survivors;
        survivors.reserve(pop_size);
        for (const auto& front : fronts) {
            if (survivors.size() + front.size() <= pop_size) {
                survivors.insert(survivors.end(), front.begin(), front.end());
                if (survivors.size() == pop_size) break;
            } else {
                auto crowd = crowding_distance(combined_objs, front);
                std::vector<std::size_t> order(front.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
                for (std::size_t i : order) {
                    survivors.push_back(front[i]);
                    if (survivors.size() == pop_size) break;
                }
                break;
            }
        }

        population.clear();
        population.reserve(pop_size);
        objectives.clear();
        objectives.reserve(pop_size);
        for (std::size_t idx : survivors) {
            population.push_back(std::move(combined[idx]));
            objectives.push_back(combined_objs[idx]);
        }
        rank_population(objectives, ranked);
        record_best();
    }

    // final rank-0 front, deduplicated by genome key
    auto fronts = fast_nondominated_sort(objectives);
    std::vector<GenomeKey> seen;
    for (std::size_t idx : fronts.front()) {
        GenomeKey k = problem.key(population[idx]);
        if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
        seen.push_back(std::move(k));
        outcome.front.push_back({population[idx], objectives[idx]});
    }
    std::stable_sort(outcome.front.begin(), outcome.front.end(), [&](const auto& a, const auto& b) {
        if (a.objectives != b.objectives) return a.objectives < b.objectives;
        return problem.key(a.genome) < problem.key(b.genome);
    });
    return outcome;
}

}  // namespace milstack

#endif
