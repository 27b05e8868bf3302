#ifndef MILSTACK_HAUSDORFF_HPP
#define MILSTACK_HAUSDORFF_HPP

#include <cstddef>
#include <vector>

#include "milstack/types.hpp"

namespace milstack {

// Rank used in the directed distance. Rank 1 picks the smallest of the
// per-point minimum distances, rank |A| the largest (the classic directed
// Hausdorff distance). Applied to a bag A the effective rank is min(d, |A|).
struct RankParameter {
    int d = 1;
};

// (T+1) x T distances between bags: rows 0..T-1 are the pairwise train-train
// block, row T holds distances from the test bag to each training bag.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t train_count)
        : train_count_(train_count), values_((train_count + 1) * train_count, 0.0) {}

    std::size_t train_count() const { return train_count_; }
    std::size_t test_row() const { return train_count_; }

    double operator()(std::size_t row, std::size_t col) const {
        return values_[row * train_count_ + col];
    }
    double& operator()(std::size_t row, std::size_t col) {
        return values_[row * train_count_ + col];
    }

private:
    std::size_t train_count_ = 0;
    std::vector<double> values_;
};

// Euclidean distance between two instances restricted to the coordinates in
// s. Throws ContractError for an empty subset or mismatched dimensionality.
double instance_distance(const Instance& a, const Instance& b, const FeatureSubset& s);

// Directed rank-d distance: the min(d,|a|)-th smallest of the per-point
// minimum distances from points of a to bag b. d = |a| reproduces the
// classic max-min directed Hausdorff distance; d = 1 gives the overall
// minimum point-pair distance.
double directed_rank_hausdorff(const Bag& a, const Bag& b, RankParameter d,
                               const FeatureSubset& s);

// Symmetrized bag distance: max of both directed values.
double rank_hausdorff(const Bag& a, const Bag& b, RankParameter d, const FeatureSubset& s);

// Assembles the (T+1) x T matrix used by the CNN classifier. The train-train
// block is symmetric with a zero diagonal. `jobs` > 1 splits the pair list
// across threads; results are bit-identical to the sequential build.
DistanceMatrix build_distance_matrix(const Dataset& train, const Bag& test,
                                     RankParameter d, const FeatureSubset& s,
                                     unsigned jobs = 1);

// T x T symmetric train-train block for one (d, s), computed once and shared
// by every leave-one-out fold. Row/column masking is the caller's business.
class PairwiseCache {
public:
    PairwiseCache() = default;
    PairwiseCache(const Dataset& train, RankParameter d, const FeatureSubset& s,
                  unsigned jobs = 1);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

namespace detail {

// Flattened view of one bag's instances; lets the hot loops walk contiguous
// memory instead of vector-of-vector.
struct BagView {
    const double* data = nullptr;
    std::size_t count = 0;   // instances
    std::size_t stride = 0;  // dimensionality
};

struct FlatBags {
    explicit FlatBags(const Dataset& data);
    BagView view(std::size_t bag_index) const;

    std::vector<double> storage;
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> counts;
    std::size_t stride = 0;
};

// Squared-distance workhorse shared by the public entry points. Returns the
// symmetrized rank-d distance (already square-rooted).
double rank_hausdorff_flat(const BagView& a, const BagView& b, int d,
                           const std::vector<std::size_t>& subset,
                           std::vector<double>& scratch_a, std::vector<double>& scratch_b);

}  // namespace detail

}  // namespace milstack

#endif
