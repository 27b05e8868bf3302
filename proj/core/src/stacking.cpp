#include "milstack/stacking.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "milstack/parallel.hpp"

namespace milstack {

namespace {

constexpr double kLogGammaLo = -3.0, kLogGammaHi = 3.0;  // gamma in [1e-3, 1e3]
constexpr double kLogCLo = -2.0, kLogCHi = 3.0;          // c in [1e-2, 1e3]

std::vector<double> row_as_doubles(const std::vector<Label>& row) {
    return std::vector<double>(row.begin(), row.end());
}

}  // namespace

double StackGenome::gamma() const { return std::pow(10.0, log_gamma); }
double StackGenome::c() const { return std::pow(10.0, log_c); }

std::vector<std::size_t> StackGenome::selected() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < member_mask.size(); ++j)
        if (member_mask[j]) out.push_back(j);
    return out;
}

MetaDataset build_meta_dataset(const Dataset& train, const ParetoFront& front, unsigned jobs) {
    if (front.empty()) throw ContractError("meta dataset requires a non-empty front");
    require_both_classes(train);

    MetaDataset meta;
    meta.labels = dataset_labels(train);
    meta.column_params.reserve(front.size());
    for (const FrontMember& m : front.members) meta.column_params.push_back(m.params);

    const std::size_t n = train.size();
    const std::size_t j_count = front.size();
    std::vector<std::vector<Label>> columns(j_count);
    parallel_for(j_count, jobs, [&](std::size_t j) {
        columns[j] = loo_validate(train, meta.column_params[j], 1).predictions;
    });

    meta.t2.assign(n, std::vector<Label>(j_count, kNegative));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < j_count; ++j) meta.t2[i][j] = columns[j][i];
    return meta;
}

SvmModel train_final(const MetaDataset& meta, double gamma, double c) {
    if (meta.rows() == 0) throw ContractError("meta dataset is empty");
    std::vector<std::vector<double>> rows;
    rows.reserve(meta.rows());
    for (const auto& row : meta.t2) rows.push_back(row_as_doubles(row));
    return train_rbf_svm(rows, meta.labels, gamma, c);
}

namespace {

// Meta rows are +-1 vectors, so the squared distance between two rows is four
// times the number of selected columns where they disagree. Disagreement
// bitsets are built once; each genome then evaluates kernels by popcount and
// an exp() table over the possible Hamming distances.
class StackEvaluator {
public:
    explicit StackEvaluator(const MetaDataset& meta)
        : labels_(meta.labels),
          n_(meta.rows()),
          columns_(meta.columns()),
          words_((meta.columns() + 63) / 64) {
        disagree_.assign(n_ * n_ * words_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                std::uint64_t* cell = disagreement(i, j);
                for (std::size_t col = 0; col < columns_; ++col)
                    if (meta.t2[i][col] != meta.t2[j][col]) cell[col / 64] |= 1ULL << (col % 64);
                std::memcpy(disagreement(j, i), cell, words_ * sizeof(std::uint64_t));
            }
    }

    // LOO over meta rows: retrain the second-level classifier per fold,
    // member columns fixed.
    std::vector<Label> loo_predictions(const StackGenome& genome, unsigned jobs) const {
        const std::vector<std::uint64_t> mask = mask_words(genome);
        const std::vector<double> table = kernel_table(genome, mask);
        const double c = genome.c();

        std::vector<Label> predictions(n_, kNegative);
        parallel_for(n_, jobs, [&](std::size_t fold) {
            std::vector<std::size_t> active;
            active.reserve(n_ - 1);
            for (std::size_t r = 0; r < n_; ++r)
                if (r != fold) active.push_back(r);

            std::vector<Label> fold_labels(active.size());
            std::vector<double> kernel(active.size() * active.size());
            for (std::size_t a = 0; a < active.size(); ++a) {
                fold_labels[a] = labels_[active[a]];
                kernel[a * active.size() + a] = 1.0;
                for (std::size_t b = a + 1; b < active.size(); ++b) {
                    double k = table[hamming(active[a], active[b], mask)];
                    kernel[a * active.size() + b] = k;
                    kernel[b * active.size() + a] = k;
                }
            }
            detail::SmoResult solved = detail::smo_solve(kernel, fold_labels, c, {});

            double f = solved.bias;
            for (std::size_t a = 0; a < active.size(); ++a) {
                if (solved.alpha[a] == 0.0) continue;
                f += solved.alpha[a] * fold_labels[a] * table[hamming(active[a], fold, mask)];
            }
            predictions[fold] = f >= 0.0 ? kPositive : kNegative;
        });
        return predictions;
    }

    Objectives objectives_for(const std::vector<Label>& predictions) const {
        long n_pos = 0, n_neg = 0, a_pos = 0, a_neg = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (labels_[i] == kPositive) {
                ++n_pos;
                if (predictions[i] == kPositive) ++a_pos;
            } else {
                ++n_neg;
                if (predictions[i] == kNegative) ++a_neg;
            }
        }
        return {static_cast<double>(a_pos) / static_cast<double>(n_pos),
                static_cast<double>(a_neg) / static_cast<double>(n_neg)};
    }

    const std::vector<Label>& labels() const { return labels_; }

private:
    std::uint64_t* disagreement(std::size_t i, std::size_t j) {
        return disagree_.data() + (i * n_ + j) * words_;
    }
    const std::uint64_t* disagreement(std::size_t i, std::size_t j) const {
        return disagree_.data() + (i * n_ + j) * words_;
    }

    std::size_t hamming(std::size_t i, std::size_t j, const std::vector<std::uint64_t>& mask) const {
        const std::uint64_t* cell = disagreement(i, j);
        std::size_t h = 0;
        for (std::size_t w = 0; w < words_; ++w) h += std::popcount(cell[w] & mask[w]);
        return h;
    }

    std::vector<std::uint64_t> mask_words(const StackGenome& genome) const {
        std::vector<std::uint64_t> mask(words_, 0);
        for (std::size_t j = 0; j < genome.member_mask.size(); ++j)
            if (genome.member_mask[j]) mask[j / 64] |= 1ULL << (j % 64);
        return mask;
    }

    std::vector<double> kernel_table(const StackGenome& genome,
                                     const std::vector<std::uint64_t>& mask) const {
        std::size_t selected = 0;
        for (std::uint64_t w : mask) selected += std::popcount(w);
        const double gamma = genome.gamma();
        std::vector<double> table(selected + 1);
        for (std::size_t h = 0; h <= selected; ++h)
            table[h] = std::exp(-gamma * 4.0 * static_cast<double>(h));
        return table;
    }

    std::vector<Label> labels_;
    std::size_t n_;
    std::size_t columns_;
    std::size_t words_;
    std::vector<std::uint64_t> disagree_;
};

GenomeKey encode_stack_genome(const StackGenome& genome) {
    GenomeKey key;
    key.reserve(2 + (genome.member_mask.size() + 63) / 64);
    std::uint64_t bits;
    std::memcpy(&bits, &genome.log_gamma, sizeof bits);
    key.push_back(bits);
    std::memcpy(&bits, &genome.log_c, sizeof bits);
    key.push_back(bits);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < genome.member_mask.size(); ++i) {
        if (genome.member_mask[i]) word |= 1ULL << (i % 64);
        if (i % 64 == 63) {
            key.push_back(word);
            word = 0;
        }
    }
    if (genome.member_mask.size() % 64 != 0) key.push_back(word);
    return key;
}

class StackProblem {
public:
    using Genome = StackGenome;

    StackProblem(const StackEvaluator& evaluator, std::size_t columns, double mutation_prob)
        : evaluator_(evaluator), columns_(columns), mutation_prob_(mutation_prob) {}

    Genome random_genome(Rng& rng) const {
        Genome g;
        g.log_gamma = rng.next_real(kLogGammaLo, kLogGammaHi);
        g.log_c = rng.next_real(kLogCLo, kLogCHi);
        g.member_mask.assign(columns_, 0);
        for (auto& bit : g.member_mask) bit = rng.next_bool(0.5) ? 1 : 0;
        repair(g.member_mask, rng);
        return g;
    }

    // The first individuals are single-member subsets spread across the
    // column range, so the search starts from configurations that reproduce
    // the first-level front and elitism keeps its trade-offs reachable.
    std::vector<Genome> initial_population(std::size_t count, Rng& rng) const {
        std::vector<Genome> out;
        out.reserve(count);
        const std::size_t singles = std::min(count, columns_);
        for (std::size_t k = 0; k < singles; ++k) {
            std::size_t column =
                singles == 1 ? 0 : k * (columns_ - 1) / (singles - 1);
            Genome g;
            // peaked kernel and c >= 1: a one-column classifier then follows
            // its column exactly instead of collapsing to the majority class
            g.log_gamma = rng.next_real(0.0, 2.0);
            g.log_c = rng.next_real(0.0, 2.0);
            g.member_mask.assign(columns_, 0);
            g.member_mask[column] = 1;
            out.push_back(std::move(g));
        }
        while (out.size() < count) out.push_back(random_genome(rng));
        return out;
    }

    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) const {
        Genome c1 = a, c2 = b;
        std::tie(c1.log_gamma, c2.log_gamma) =
            detail::sbx_pair(a.log_gamma, b.log_gamma, kLogGammaLo, kLogGammaHi, rng);
        std::tie(c1.log_c, c2.log_c) = detail::sbx_pair(a.log_c, b.log_c, kLogCLo, kLogCHi, rng);
        for (std::size_t j = 0; j < columns_; ++j) {
            if (rng.next_bool(0.5)) {
                c1.member_mask[j] = b.member_mask[j];
                c2.member_mask[j] = a.member_mask[j];
            }
        }
        repair(c1.member_mask, rng);
        repair(c2.member_mask, rng);
        return {std::move(c1), std::move(c2)};
    }

    void mutate(Genome& g, Rng& rng) const {
        if (rng.next_bool(mutation_prob_))
            g.log_gamma = detail::polynomial_mutate(g.log_gamma, kLogGammaLo, kLogGammaHi, rng);
        if (rng.next_bool(mutation_prob_))
            g.log_c = detail::polynomial_mutate(g.log_c, kLogCLo, kLogCHi, rng);
        const double p_bit = 1.0 / static_cast<double>(columns_);
        for (auto& bit : g.member_mask)
            if (rng.next_bool(p_bit)) bit = bit ? 0 : 1;
        repair(g.member_mask, rng);
    }

    GenomeKey key(const Genome& g) const { return encode_stack_genome(g); }

    Objectives evaluate(const Genome& g) const {
        return evaluator_.objectives_for(evaluator_.loo_predictions(g, 1));
    }

private:
    static void repair(std::vector<std::uint8_t>& mask, Rng& rng) {
        for (std::uint8_t bit : mask)
            if (bit) return;
        mask[rng.next_index(mask.size())] = 1;
    }

    const StackEvaluator& evaluator_;
    std::size_t columns_;
    double mutation_prob_;
};

}  // namespace

ValidationReport stack_loo_report(const MetaDataset& meta, const StackGenome& genome,
                                  unsigned jobs) {
    if (meta.rows() < 3) throw ContractError("stack LOO requires at least 3 meta rows");
    StackEvaluator evaluator(meta);
    ValidationReport report;
    report.predictions = evaluator.loo_predictions(genome, jobs);
    Objectives objectives = evaluator.objectives_for(report.predictions);
    report.acc_pos = objectives.first;
    report.acc_neg = objectives.second;
    report.scheme = {ValidationScheme::kLeaveOneOut, 0, 0};
    report.fold_of_bag.resize(meta.rows());
    for (std::size_t i = 0; i < meta.rows(); ++i) report.fold_of_bag[i] = static_cast<int>(i);
    return report;
}

StackFront tune_stack(const MetaDataset& meta, const GaConfig& config, unsigned jobs) {
    if (meta.columns() == 0) throw ContractError("tune_stack requires at least one member");
    if (meta.rows() < 3) throw ContractError("tune_stack requires at least 3 meta rows");

    StackEvaluator evaluator(meta);
    StackProblem problem(evaluator, meta.columns(), config.mutation_prob);
    SearchOutcome<StackProblem> outcome = nsga2_search(problem, config, jobs);

    StackFront front;
    front.members.reserve(outcome.front.size());
    for (auto& member : outcome.front) {
        StackFrontMember fm;
        fm.genome = std::move(member.genome);
        fm.acc_pos = member.objectives.first;
        fm.acc_neg = member.objectives.second;
        front.members.push_back(std::move(fm));
    }
    return front;
}

StackedModel assemble_stacked_model(const Dataset& train, const MetaDataset& meta,
                                    const StackGenome& choice) {
    const std::vector<std::size_t> selected = choice.selected();
    if (selected.empty()) throw ContractError("stacked model needs at least one member");

    StackedModel model;
    model.gamma = choice.gamma();
    model.c = choice.c();
    model.normalization = train.normalization;
    model.row_labels = meta.labels;

    model.members.reserve(selected.size());
    for (std::size_t j : selected) model.members.push_back(meta.column_params[j]);

    model.meta_rows.assign(meta.rows(), std::vector<Label>(selected.size(), kNegative));
    std::vector<std::vector<double>> rows(meta.rows());
    for (std::size_t i = 0; i < meta.rows(); ++i) {
        rows[i].reserve(selected.size());
        for (std::size_t k = 0; k < selected.size(); ++k) {
            model.meta_rows[i][k] = meta.t2[i][selected[k]];
            rows[i].push_back(static_cast<double>(model.meta_rows[i][k]));
        }
    }

    SvmModel svm = train_rbf_svm(rows, meta.labels, model.gamma, model.c);
    model.alphas = std::move(svm.alphas);
    model.bias = svm.bias;
    return model;
}

void rehydrate_stacked_model(StackedModel& model, const Dataset& train, unsigned jobs) {
    if (model.members.empty()) throw ContractError("stacked model has no members");
    require_both_classes(train);

    const std::size_t n = train.size();
    const std::size_t j_count = model.members.size();
    std::vector<std::vector<Label>> columns(j_count);
    parallel_for(j_count, jobs, [&](std::size_t j) {
        columns[j] = loo_validate(train, model.members[j], 1).predictions;
    });

    model.row_labels = dataset_labels(train);
    model.meta_rows.assign(n, std::vector<Label>(j_count, kNegative));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < j_count; ++j) model.meta_rows[i][j] = columns[j][i];

    if (model.alphas.size() != n)
        throw ContractError("stacked model alphas do not match the training set size");
}

std::vector<Label> member_predictions(const StackedModel& model, const Dataset& train,
                                      const Bag& test, unsigned jobs) {
    std::vector<Label> labels(model.members.size(), kNegative);
    parallel_for(model.members.size(), jobs, [&](std::size_t j) {
        labels[j] = cnn_classify(train, model.members[j], test, 1).label;
    });
    return labels;
}

Label predict_bag(const StackedModel& model, const Dataset& train, const Bag& test,
                  unsigned jobs) {
    if (!model.ready())
        throw ContractError("stacked model must be rehydrated before prediction");
    if (test.dimensionality() != train.dimensionality)
        throw ContractError("test bag dimensionality does not match training set");

    const std::vector<Label> member_labels = member_predictions(model, train, test, jobs);
    std::vector<double> u(member_labels.begin(), member_labels.end());

    double f = model.bias;
    for (std::size_t i = 0; i < model.meta_rows.size(); ++i) {
        if (model.alphas[i] == 0.0) continue;
        double d2 = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            double diff = static_cast<double>(model.meta_rows[i][k]) - u[k];
            d2 += diff * diff;
        }
        f += model.alphas[i] * model.row_labels[i] * std::exp(-model.gamma * d2);
    }
    return f >= 0.0 ? kPositive : kNegative;
}

}  // namespace milstack
