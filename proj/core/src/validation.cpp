#include "milstack/validation.hpp"

#include <algorithm>
#include <numeric>

#include "milstack/parallel.hpp"
#include "milstack/rng.hpp"

namespace milstack {

std::string ValidationScheme::name() const {
    if (kind == kLeaveOneOut) return "loo";
    return "kfold(k=" + std::to_string(k) + ",seed=" + std::to_string(seed) + ")";
}

namespace detail {

CnnPrediction classify_masked(const PairwiseCache& cache, const std::vector<Label>& labels,
                              const std::vector<std::size_t>& active, std::size_t test_index,
                              const CnnParams& params) {
    const std::size_t t = active.size();
    if (params.eta_r < 1 || static_cast<std::size_t>(params.eta_r) > t - 1 ||
        params.eta_c < 1 || static_cast<std::size_t>(params.eta_c) > t - 1)
        throw ContractError("eta_r/eta_c out of range for fold training size " +
                            std::to_string(t));

    // references: eta_r nearest active bags, ties to the lower index
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(t);
    for (std::size_t j : active) order.emplace_back(cache(test_index, j), j);
    std::sort(order.begin(), order.end());

    NeighbourCounts counts;
    for (int k = 0; k < params.eta_r; ++k) {
        if (labels[order[k].second] == kPositive)
            ++counts.pos_refs;
        else
            ++counts.neg_refs;
    }

    // citers: the test entry must rank within the eta_c smallest of bag j's
    // column (self-distance excluded; ties outrank the test bag, which sits
    // at the highest row index). The cache is symmetric, so the column scan
    // walks row j contiguously.
    for (std::size_t j : active) {
        const double test_dist = cache(test_index, j);
        int rank = 0;
        for (std::size_t r : active) {
            if (r == j) continue;
            if (cache(j, r) <= test_dist) ++rank;
        }
        if (rank < params.eta_c) {
            if (labels[j] == kPositive)
                ++counts.pos_citers;
            else
                ++counts.neg_citers;
        }
    }
    return score_counts(counts, params.theta);
}

}  // namespace detail

namespace {

void check_common(const Dataset& train, const CnnParams& params) {
    if (train.size() < 3) throw ContractError("validation requires at least 3 bags");
    require_both_classes(train);
    if (params.d.d < 1) throw ContractError("rank parameter must be >= 1");
    if (!(params.theta > 0.0 && params.theta < 1.0))
        throw ContractError("theta must lie in the open interval (0,1)");
}

ValidationReport tally(const Dataset& train, std::vector<Label> predictions,
                       std::vector<int> fold_of_bag, ValidationScheme scheme) {
    ValidationReport report;
    report.scheme = scheme;
    report.predictions = std::move(predictions);
    report.fold_of_bag = std::move(fold_of_bag);

    long n_pos = 0, n_neg = 0, a_pos = 0, a_neg = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.bags[i].label == kPositive) {
            ++n_pos;
            if (report.predictions[i] == kPositive) ++a_pos;
        } else {
            ++n_neg;
            if (report.predictions[i] == kNegative) ++a_neg;
        }
    }
    report.acc_pos = static_cast<double>(a_pos) / static_cast<double>(n_pos);
    report.acc_neg = static_cast<double>(a_neg) / static_cast<double>(n_neg);
    return report;
}

}  // namespace

ValidationReport loo_validate(const Dataset& train, const CnnParams& params, unsigned jobs) {
    check_common(train, params);
    const std::size_t n = train.size();
    if (params.eta_r > static_cast<long>(n) - 2 || params.eta_c > static_cast<long>(n) - 2)
        throw ContractError("eta_r and eta_c must be <= N-2 for leave-one-out");

    const PairwiseCache cache(train, params.d, params.s, jobs);
    const std::vector<Label> labels = dataset_labels(train);

    std::vector<Label> predictions(n, kNegative);
    parallel_for(n, jobs, [&](std::size_t i) {
        std::vector<std::size_t> active;
        active.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) active.push_back(j);
        predictions[i] = detail::classify_masked(cache, labels, active, i, params).label;
    });

    std::vector<int> fold_of_bag(n);
    std::iota(fold_of_bag.begin(), fold_of_bag.end(), 0);
    return tally(train, std::move(predictions), std::move(fold_of_bag),
                 {ValidationScheme::kLeaveOneOut, 0, 0});
}

std::vector<int> stratified_folds(const std::vector<Label>& labels, int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> fold_of_bag(labels.size(), -1);
    // the round-robin position carries over between classes so folds stay as
    // even as possible overall; with k = N every fold holds exactly one bag
    std::size_t next = 0;
    for (Label cls : {kPositive, kNegative}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        shuffle(members, rng);
        for (std::size_t member : members)
            fold_of_bag[member] = static_cast<int>(next++ % static_cast<std::size_t>(k));
    }
    return fold_of_bag;
}

ValidationReport kfold_validate(const Dataset& train, const CnnParams& params, int k,
                                std::uint64_t seed, unsigned jobs) {
    check_common(train, params);
    const std::size_t n = train.size();
    if (k < 2 || static_cast<std::size_t>(k) > n)
        throw ContractError("k must satisfy 2 <= k <= N");

    const std::vector<Label> labels = dataset_labels(train);
    const std::vector<int> fold_of_bag = stratified_folds(labels, k, seed);

    // per-fold training portions, each checked for both classes
    std::vector<std::vector<std::size_t>> active_of_fold(k);
    for (int f = 0; f < k; ++f) {
        bool has_pos = false, has_neg = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (fold_of_bag[j] == f) continue;
            active_of_fold[f].push_back(j);
            (labels[j] == kPositive ? has_pos : has_neg) = true;
        }
        if (active_of_fold[f].empty() || !has_pos || !has_neg)
            throw ContractError("fold " + std::to_string(f) +
                                " leaves a training portion without both classes");
    }

    const PairwiseCache cache(train, params.d, params.s, jobs);
    std::vector<Label> predictions(n, kNegative);
    parallel_for(n, jobs, [&](std::size_t i) {
        predictions[i] =
            detail::classify_masked(cache, labels, active_of_fold[fold_of_bag[i]], i, params)
                .label;
    });

    return tally(train, std::move(predictions), fold_of_bag,
                 {ValidationScheme::kKFold, k, seed});
}

}  // namespace milstack
