#ifndef MILSTACK_VALIDATION_HPP
#define MILSTACK_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "milstack/cnn.hpp"
#include "milstack/types.hpp"

namespace milstack {

struct ValidationScheme {
    enum Kind { kLeaveOneOut, kKFold };
    Kind kind = kLeaveOneOut;
    int k = 0;                 // fold count when kind == kKFold
    std::uint64_t seed = 0;    // fold-assignment seed when kind == kKFold

    std::string name() const;
};

struct ValidationReport {
    double acc_pos = 0.0;                 // Acc+ : correct positives / n+
    double acc_neg = 0.0;                 // Acc- : correct negatives / n-
    std::vector<Label> predictions;       // out-of-fold label per bag, dataset order
    ValidationScheme scheme;
    std::vector<int> fold_of_bag;         // which fold held each bag out (LOO: bag index)
};

// Leave-one-out over all N bags: each bag is classified by a CNN trained on
// the other N-1. The train-train distance block for (d, s) is computed once
// and each fold masks one row/column instead of rebuilding the matrix.
// Deterministic. Requires N >= 3, both classes present, eta_r and eta_c
// <= N-2 (each fold trains on N-1 bags).
ValidationReport loo_validate(const Dataset& train, const CnnParams& params,
                              unsigned jobs = 1);

// Stratified k-fold: per-class seeded shuffle then round-robin assignment,
// so class balance is preserved. Each bag is predicted exactly once by a
// classifier trained on the remaining folds. k = N reproduces loo_validate
// exactly. Throws ContractError when a fold's training portion lacks a class.
ValidationReport kfold_validate(const Dataset& train, const CnnParams& params, int k,
                                std::uint64_t seed, unsigned jobs = 1);

// Stratified fold assignment used by kfold_validate; exposed for tests and
// fold bookkeeping. Result[i] = fold of bag i.
std::vector<int> stratified_folds(const std::vector<Label>& labels, int k,
                                  std::uint64_t seed);

namespace detail {

// Classifies the bag at `test_index` against the bags in `active` (sorted
// ascending, not containing test_index), reading distances from the shared
// cache. Matches cnn_classify built on the equivalent dataset slice exactly.
CnnPrediction classify_masked(const PairwiseCache& cache, const std::vector<Label>& labels,
                              const std::vector<std::size_t>& active, std::size_t test_index,
                              const CnnParams& params);

}  // namespace detail

}  // namespace milstack

#endif
