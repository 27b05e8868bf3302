#ifndef MILSTACK_SVM_HPP
#define MILSTACK_SVM_HPP

#include <cstddef>
#include <vector>

#include "milstack/types.hpp"

namespace milstack {

// Soft-margin RBF-kernel classifier trained with a sequential-minimal-
// optimization dual solver. Small problems only (the stacking layer trains on
// at most a few hundred rows).
struct SvmModel {
    double gamma = 1.0;
    double c = 1.0;
    double bias = 0.0;
    std::vector<double> alphas;               // one per training row, in [0, c]
    std::vector<Label> labels;                // training labels
    std::vector<std::vector<double>> rows;    // training rows (kernel expansion)

    double decision(const std::vector<double>& u) const;
    Label predict(const std::vector<double>& u) const;  // sign; 0 maps to +1

    std::size_t support_count() const;
};

struct SmoSettings {
    double tolerance = 1e-3;  // KKT violation tolerance
    int max_passes = 8;       // consecutive clean sweeps before stopping
    int max_sweeps = 2000;    // hard bound on total sweeps
};

// Trains on the given rows/labels. Deterministic: the working-pair traversal
// is index-ordered and the second multiplier is chosen by maximal error gap
// with index tie-break. Throws ContractError when only one class is present.
// The degenerate all-identical-rows case (the solver cannot move any
// multiplier) falls back to predicting the majority class via the bias.
SvmModel train_rbf_svm(const std::vector<std::vector<double>>& rows,
                       const std::vector<Label>& labels, double gamma, double c,
                       const SmoSettings& settings = {});

namespace detail {

struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
};

// Dual solver over a precomputed n x n kernel matrix (row-major). Maintains
// 0 <= alpha <= c and sum(alpha_i y_i) = 0 throughout.
SmoResult smo_solve(const std::vector<double>& kernel, const std::vector<Label>& labels,
                    double c, const SmoSettings& settings);

}  // namespace detail

}  // namespace milstack

#endif
