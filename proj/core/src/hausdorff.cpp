#include "milstack/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "milstack/parallel.hpp"

namespace milstack {

namespace detail {

FlatBags::FlatBags(const Dataset& data) {
    stride = data.dimensionality;
    offsets.reserve(data.bags.size());
    counts.reserve(data.bags.size());
    storage.reserve(data.instance_count() * stride);
    for (const Bag& bag : data.bags) {
        offsets.push_back(storage.size());
        counts.push_back(bag.instances.size());
        for (const Instance& inst : bag.instances)
            storage.insert(storage.end(), inst.begin(), inst.end());
    }
}

BagView FlatBags::view(std::size_t bag_index) const {
    return {storage.data() + offsets[bag_index], counts[bag_index], stride};
}

namespace {

inline double squared_distance(const double* a, const double* b,
                               const std::vector<std::size_t>& subset) {
    double sum = 0.0;
    for (std::size_t f : subset) {
        double diff = a[f] - b[f];
        sum += diff * diff;
    }
    return sum;
}

// k-th smallest (1-based) of the values in scratch; scratch is clobbered.
inline double kth_smallest(std::vector<double>& scratch, std::size_t k) {
    std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end());
    return scratch[k - 1];
}

}  // namespace

double rank_hausdorff_flat(const BagView& a, const BagView& b, int d,
                           const std::vector<std::size_t>& subset,
                           std::vector<double>& scratch_a, std::vector<double>& scratch_b) {
    // One pass over all instance pairs fills the per-point minima of both
    // directions; ranks are then selected on squared distances (sqrt is
    // monotone, so the selected value is the same either way).
    scratch_a.assign(a.count, std::numeric_limits<double>::infinity());
    scratch_b.assign(b.count, std::numeric_limits<double>::infinity());

    const double* pa = a.data;
    for (std::size_t i = 0; i < a.count; ++i, pa += a.stride) {
        const double* pb = b.data;
        double row_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.count; ++j, pb += b.stride) {
            double d2 = squared_distance(pa, pb, subset);
            row_min = std::min(row_min, d2);
            scratch_b[j] = std::min(scratch_b[j], d2);
        }
        scratch_a[i] = row_min;
    }

    const std::size_t rank_a = std::min<std::size_t>(static_cast<std::size_t>(d), a.count);
    const std::size_t rank_b = std::min<std::size_t>(static_cast<std::size_t>(d), b.count);
    double directed_ab = kth_smallest(scratch_a, rank_a);
    double directed_ba = kth_smallest(scratch_b, rank_b);
    return std::sqrt(std::max(directed_ab, directed_ba));
}

}  // namespace detail

namespace {

void check_subset(const FeatureSubset& s, std::size_t dimensionality) {
    if (s.empty()) throw ContractError("feature subset must be non-empty");
    if (s.dimensionality() != dimensionality)
        throw ContractError("feature subset dimensionality " +
                            std::to_string(s.dimensionality()) + " does not match instances (" +
                            std::to_string(dimensionality) + ")");
}

// Bags arriving through the public API are vector-of-vector; flatten small.
struct FlatBag {
    std::vector<double> storage;
    detail::BagView view;

    explicit FlatBag(const Bag& bag) {
        const std::size_t m = bag.dimensionality();
        storage.reserve(bag.size() * m);
        for (const Instance& inst : bag.instances)
            storage.insert(storage.end(), inst.begin(), inst.end());
        view = {storage.data(), bag.size(), m};
    }
};

}  // namespace

double instance_distance(const Instance& a, const Instance& b, const FeatureSubset& s) {
    if (a.size() != b.size())
        throw ContractError("instances differ in dimensionality");
    check_subset(s, a.size());
    double sum = 0.0;
    for (std::size_t f : s.indices()) {
        double diff = a[f] - b[f];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double directed_rank_hausdorff(const Bag& a, const Bag& b, RankParameter d,
                               const FeatureSubset& s) {
    if (a.instances.empty() || b.instances.empty())
        throw ContractError("rank Hausdorff distance requires non-empty bags");
    if (a.dimensionality() != b.dimensionality())
        throw ContractError("bags differ in dimensionality");
    if (d.d < 1) throw ContractError("rank parameter must be >= 1");
    check_subset(s, a.dimensionality());

    std::vector<double> mins;
    mins.reserve(a.size());
    for (const Instance& pa : a.instances) {
        double best = std::numeric_limits<double>::infinity();
        for (const Instance& pb : b.instances) {
            double sum = 0.0;
            for (std::size_t f : s.indices()) {
                double diff = pa[f] - pb[f];
                sum += diff * diff;
            }
            best = std::min(best, sum);
        }
        mins.push_back(best);
    }
    const std::size_t rank = std::min<std::size_t>(static_cast<std::size_t>(d.d), mins.size());
    std::nth_element(mins.begin(), mins.begin() + (rank - 1), mins.end());
    return std::sqrt(mins[rank - 1]);
}

double rank_hausdorff(const Bag& a, const Bag& b, RankParameter d, const FeatureSubset& s) {
    if (a.instances.empty() || b.instances.empty())
        throw ContractError("rank Hausdorff distance requires non-empty bags");
    if (a.dimensionality() != b.dimensionality())
        throw ContractError("bags differ in dimensionality");
    if (d.d < 1) throw ContractError("rank parameter must be >= 1");
    check_subset(s, a.dimensionality());

    FlatBag fa(a), fb(b);
    std::vector<double> scratch_a, scratch_b;
    return detail::rank_hausdorff_flat(fa.view, fb.view, d.d, s.indices(), scratch_a, scratch_b);
}

DistanceMatrix build_distance_matrix(const Dataset& train, const Bag& test, RankParameter d,
                                     const FeatureSubset& s, unsigned jobs) {
    if (train.bags.empty()) throw ContractError("training set must be non-empty");
    if (test.dimensionality() != train.dimensionality)
        throw ContractError("test bag dimensionality does not match training set");
    if (d.d < 1) throw ContractError("rank parameter must be >= 1");
    check_subset(s, train.dimensionality);

    const std::size_t t = train.size();
    detail::FlatBags flat(train);
    FlatBag test_flat(test);

    DistanceMatrix matrix(t);

    // upper-triangle pairs plus the test row, flattened into one work list
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(t * (t - 1) / 2 + t);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = i + 1; j < t; ++j) pairs.emplace_back(i, j);
    for (std::size_t j = 0; j < t; ++j) pairs.emplace_back(t, j);

    parallel_for(pairs.size(), jobs, [&](std::size_t w) {
        thread_local std::vector<double> scratch_a, scratch_b;
        auto [i, j] = pairs[w];
        detail::BagView a = (i == t) ? test_flat.view : flat.view(i);
        double value =
            detail::rank_hausdorff_flat(a, flat.view(j), d.d, s.indices(), scratch_a, scratch_b);
        matrix(i, j) = value;
        if (i != t) matrix(j, i) = value;
    });
    return matrix;
}

PairwiseCache::PairwiseCache(const Dataset& train, RankParameter d, const FeatureSubset& s,
                             unsigned jobs) {
    if (train.bags.empty()) throw ContractError("training set must be non-empty");
    if (d.d < 1) throw ContractError("rank parameter must be >= 1");
    check_subset(s, train.dimensionality);

    n_ = train.size();
    values_.assign(n_ * n_, 0.0);
    detail::FlatBags flat(train);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n_ * (n_ - 1) / 2);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) pairs.emplace_back(i, j);

    parallel_for(pairs.size(), jobs, [&](std::size_t w) {
        thread_local std::vector<double> scratch_a, scratch_b;
        auto [i, j] = pairs[w];
        double value =
            detail::rank_hausdorff_flat(flat.view(i), flat.view(j), d.d, s.indices(), scratch_a,
                                        scratch_b);
        values_[i * n_ + j] = value;
        values_[j * n_ + i] = value;
    });
}

}  // namespace milstack
