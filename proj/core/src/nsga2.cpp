#include "milstack/nsga2.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "milstack/validation.hpp"

namespace milstack {

void GaConfig::validate() const {
    if (population < 4 || population % 2 != 0)
        throw ContractError("population must be an even integer >= 4");
    if (generations < 1) throw ContractError("generations must be >= 1");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw ContractError("crossover_prob must lie in [0,1]");
    if (mutation_prob < 0.0 || mutation_prob > 1.0)
        throw ContractError("mutation_prob must lie in [0,1]");
    if (eta_max < 1 || d_max < 1) throw ContractError("eta_max and d_max must be >= 1");
}

GenomeKey encode_genome(const CnnGenome& genome) {
    GenomeKey key;
    key.reserve(3 + (genome.feature_mask.size() + 63) / 64);
    key.push_back((static_cast<std::uint64_t>(static_cast<std::uint32_t>(genome.eta_r)) << 32) |
                  static_cast<std::uint32_t>(genome.eta_c));
    key.push_back(static_cast<std::uint64_t>(static_cast<std::uint32_t>(genome.d)));
    std::uint64_t theta_bits;
    static_assert(sizeof theta_bits == sizeof genome.theta);
    std::memcpy(&theta_bits, &genome.theta, sizeof theta_bits);
    key.push_back(theta_bits);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < genome.feature_mask.size(); ++i) {
        if (genome.feature_mask[i]) word |= (1ULL << (i % 64));
        if (i % 64 == 63) {
            key.push_back(word);
            word = 0;
        }
    }
    if (genome.feature_mask.size() % 64 != 0) key.push_back(word);
    return key;
}

CnnGenome decode_genome(const GenomeKey& key, std::size_t dimensionality) {
    CnnGenome genome;
    genome.eta_r = static_cast<int>(key[0] >> 32);
    genome.eta_c = static_cast<int>(key[0] & 0xffffffffULL);
    genome.d = static_cast<int>(key[1]);
    std::memcpy(&genome.theta, &key[2], sizeof genome.theta);
    genome.feature_mask.assign(dimensionality, 0);
    for (std::size_t i = 0; i < dimensionality; ++i)
        genome.feature_mask[i] = (key[3 + i / 64] >> (i % 64)) & 1ULL;
    return genome;
}

CnnParams decode_to_params(const CnnGenome& genome, std::size_t train_bag_count) {
    const int eta_cap = static_cast<int>(train_bag_count) - 2;
    if (eta_cap < 1) throw ContractError("training set too small to decode a genome");

    CnnParams params;
    params.eta_r = std::clamp(genome.eta_r, 1, eta_cap);
    params.eta_c = std::clamp(genome.eta_c, 1, eta_cap);
    params.d = RankParameter{std::max(1, genome.d)};
    params.theta = genome.theta;

    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < genome.feature_mask.size(); ++i)
        if (genome.feature_mask[i]) indices.push_back(i);
    params.s = FeatureSubset(std::move(indices), genome.feature_mask.size());
    return params;
}

Objectives evaluate_genome(const Dataset& train, const CnnGenome& genome, FitnessMemo& memo,
                           unsigned jobs) {
    GenomeKey key = encode_genome(genome);
    if (const Objectives* hit = memo.find(key)) return *hit;
    ValidationReport report = loo_validate(train, decode_to_params(genome, train.size()), jobs);
    Objectives objectives{report.acc_pos, report.acc_neg};
    memo.insert(std::move(key), objectives);
    return objectives;
}

namespace detail {

std::pair<double, double> sbx_pair(double a, double b, double lo, double hi, Rng& rng) {
    constexpr double kEta = 15.0;
    const double u = rng.next_real();
    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (kEta + 1.0))
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (kEta + 1.0));
    double c1 = 0.5 * ((a + b) - beta * (b - a));
    double c2 = 0.5 * ((a + b) + beta * (b - a));
    return {std::clamp(c1, lo, hi), std::clamp(c2, lo, hi)};
}

double polynomial_mutate(double x, double lo, double hi, Rng& rng) {
    constexpr double kEta = 20.0;
    const double u = rng.next_real();
    const double span = hi - lo;
    double delta;
    if (u < 0.5)
        delta = std::pow(2.0 * u, 1.0 / (kEta + 1.0)) - 1.0;
    else
        delta = 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (kEta + 1.0));
    return std::clamp(x + delta * span, lo, hi);
}

}  // namespace detail

namespace {

using detail::polynomial_mutate;
using detail::sbx_pair;

constexpr double kThetaLo = 0.05;
constexpr double kThetaHi = 0.95;

// GA problem adapter for the CNN parameter search.
class CnnSearchProblem {
public:
    using Genome = CnnGenome;

    CnnSearchProblem(const Dataset& train, const GaConfig& config)
        : train_(train), config_(config), dimensionality_(train.dimensionality) {}

    Genome random_genome(Rng& rng) const {
        Genome g;
        g.eta_r = rng.next_int(1, config_.eta_max);
        g.eta_c = rng.next_int(1, config_.eta_max);
        g.d = rng.next_int(1, config_.d_max);
        g.theta = rng.next_real(kThetaLo, kThetaHi);
        g.feature_mask.assign(dimensionality_, 0);
        for (auto& bit : g.feature_mask) bit = rng.next_bool(0.5) ? 1 : 0;
        repair_mask(g.feature_mask, rng);
        return g;
    }

    std::vector<Genome> initial_population(std::size_t count, Rng& rng) const {
        std::vector<Genome> out;
        out.reserve(count);
        while (out.size() < count) out.push_back(random_genome(rng));
        return out;
    }

    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) const {
        Genome c1 = a, c2 = b;

        // single-point blend across the three integer genes
        const int cut = rng.next_int(0, 3);
        const int a_ints[3] = {a.eta_r, a.eta_c, a.d};
        const int b_ints[3] = {b.eta_r, b.eta_c, b.d};
        int c1_ints[3], c2_ints[3];
        for (int i = 0; i < 3; ++i) {
            c1_ints[i] = i < cut ? a_ints[i] : b_ints[i];
            c2_ints[i] = i < cut ? b_ints[i] : a_ints[i];
        }
        c1.eta_r = c1_ints[0]; c1.eta_c = c1_ints[1]; c1.d = c1_ints[2];
        c2.eta_r = c2_ints[0]; c2.eta_c = c2_ints[1]; c2.d = c2_ints[2];

        std::tie(c1.theta, c2.theta) = sbx_pair(a.theta, b.theta, kThetaLo, kThetaHi, rng);

        // uniform crossover on the feature mask
        for (std::size_t i = 0; i < dimensionality_; ++i) {
            if (rng.next_bool(0.5)) {
                c1.feature_mask[i] = b.feature_mask[i];
                c2.feature_mask[i] = a.feature_mask[i];
            }
        }
        repair_mask(c1.feature_mask, rng);
        repair_mask(c2.feature_mask, rng);
        return {std::move(c1), std::move(c2)};
    }

    void mutate(Genome& g, Rng& rng) const {
        const double p = config_.mutation_prob;
        if (rng.next_bool(p)) g.eta_r = rng.next_int(1, config_.eta_max);
        if (rng.next_bool(p)) g.eta_c = rng.next_int(1, config_.eta_max);
        if (rng.next_bool(p)) g.d = rng.next_int(1, config_.d_max);
        if (rng.next_bool(p)) g.theta = polynomial_mutate(g.theta, kThetaLo, kThetaHi, rng);

        const double p_bit = 1.0 / static_cast<double>(dimensionality_);
        for (auto& bit : g.feature_mask)
            if (rng.next_bool(p_bit)) bit = bit ? 0 : 1;
        repair_mask(g.feature_mask, rng);
    }

    GenomeKey key(const Genome& g) const { return encode_genome(g); }

    Objectives evaluate(const Genome& g) const {
        ValidationReport report = loo_validate(train_, decode_to_params(g, train_.size()), 1);
        return {report.acc_pos, report.acc_neg};
    }

private:
    static void repair_mask(std::vector<std::uint8_t>& mask, Rng& rng) {
        for (std::uint8_t bit : mask)
            if (bit) return;
        mask[rng.next_index(mask.size())] = 1;
    }

    const Dataset& train_;
    GaConfig config_;
    std::size_t dimensionality_;
};

}  // namespace

ParetoFront evolve(const Dataset& train, const GaConfig& config, unsigned jobs,
                   std::vector<std::pair<double, double>>* best_by_generation) {
    require_both_classes(train);
    if (train.size() < 4) throw ContractError("evolve requires at least 4 training bags");

    CnnSearchProblem problem(train, config);
    SearchOutcome<CnnSearchProblem> outcome = nsga2_search(problem, config, jobs);
    if (best_by_generation) *best_by_generation = outcome.best_by_generation;

    ParetoFront front;
    front.members.reserve(outcome.front.size());
    for (auto& member : outcome.front) {
        FrontMember fm;
        fm.params = decode_to_params(member.genome, train.size());
        fm.genome = std::move(member.genome);
        fm.acc_pos = member.objectives.first;
        fm.acc_neg = member.objectives.second;
        front.members.push_back(std::move(fm));
    }
    return front;
}

}  // namespace milstack
