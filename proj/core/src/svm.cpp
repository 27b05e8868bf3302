#include "milstack/svm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace milstack {

namespace {

double squared_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return sum;
}

}  // namespace

double SvmModel::decision(const std::vector<double>& u) const {
    double f = bias;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (alphas[i] == 0.0) continue;
        f += alphas[i] * labels[i] * std::exp(-gamma * squared_norm_diff(rows[i], u));
    }
    return f;
}

Label SvmModel::predict(const std::vector<double>& u) const {
    return decision(u) >= 0.0 ? kPositive : kNegative;
}

std::size_t SvmModel::support_count() const {
    std::size_t n = 0;
    for (double a : alphas)
        if (a > 0.0) ++n;
    return n;
}

namespace detail {

SmoResult smo_solve(const std::vector<double>& kernel, const std::vector<Label>& labels,
                    double c, const SmoSettings& settings) {
    const std::size_t n = labels.size();
    if (n == 0 || kernel.size() != n * n)
        throw ContractError("svm: kernel size does not match label count");
    if (c <= 0.0) throw ContractError("svm: c must be positive");

    bool has_pos = false, has_neg = false;
    for (Label y : labels) (y == kPositive ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw ContractError("svm: training labels are single-class");

    auto K = [&](std::size_t i, std::size_t j) { return kernel[i * n + j]; };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i];

    // error cache: E[k] = f(x_k) - y_k, updated incrementally on each step
    std::vector<double> errors(n);
    for (std::size_t i = 0; i < n; ++i) errors[i] = -y[i];
    double b = 0.0;

    const double tol = settings.tolerance;
    int clean_passes = 0;
    for (int sweep = 0; sweep < settings.max_sweeps && clean_passes < settings.max_passes;
         ++sweep) {
        int changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = errors[i];
            const double ri = y[i] * ei;
            if (!((ri < -tol && alpha[i] < c) || (ri > tol && alpha[i] > 0.0))) continue;

            // second multiplier: maximal error gap, lowest index on ties
            std::size_t j = i == 0 ? 1 : 0;
            double best_gap = -1.0;
            for (std::size_t cand = 0; cand < n; ++cand) {
                if (cand == i) continue;
                double gap = std::abs(ei - errors[cand]);
                if (gap > best_gap) {
                    best_gap = gap;
                    j = cand;
                }
            }
            const double ej = errors[j];

            double lo, hi;
            if (labels[i] != labels[j]) {
                lo = std::max(0.0, alpha[j] - alpha[i]);
                hi = std::min(c, c + alpha[j] - alpha[i]);
            } else {
                lo = std::max(0.0, alpha[i] + alpha[j] - c);
                hi = std::min(c, alpha[i] + alpha[j]);
            }
            if (lo >= hi) continue;

            const double eta = 2.0 * K(i, j) - K(i, i) - K(j, j);
            if (eta >= 0.0) continue;

            double aj = alpha[j] - y[j] * (ei - ej) / eta;
            aj = std::clamp(aj, lo, hi);
            if (std::abs(aj - alpha[j]) < 1e-7) continue;
            double ai = alpha[i] + y[i] * y[j] * (alpha[j] - aj);
            ai = std::clamp(ai, 0.0, c);

            const double delta_i = ai - alpha[i];
            const double delta_j = aj - alpha[j];

            const double b1 = b - ei - y[i] * delta_i * K(i, i) - y[j] * delta_j * K(i, j);
            const double b2 = b - ej - y[i] * delta_i * K(i, j) - y[j] * delta_j * K(j, j);
            double new_b;
            if (ai > 0.0 && ai < c)
                new_b = b1;
            else if (aj > 0.0 && aj < c)
                new_b = b2;
            else
                new_b = 0.5 * (b1 + b2);
            const double delta_b = new_b - b;

            alpha[i] = ai;
            alpha[j] = aj;
            b = new_b;
            for (std::size_t k = 0; k < n; ++k)
                errors[k] += delta_i * y[i] * K(i, k) + delta_j * y[j] * K(j, k) + delta_b;
            ++changed;
        }
        clean_passes = changed == 0 ? clean_passes + 1 : 0;
    }

    bool any_support = false;
    for (double a : alpha)
        if (a > 0.0) { any_support = true; break; }
    if (!any_support) {
        // identical-row degenerate case: no pair could move, fall back to
        // the majority class through the bias
        std::size_t pos = 0;
        for (Label yl : labels)
            if (yl == kPositive) ++pos;
        b = (2 * pos >= n) ? 1.0 : -1.0;
    }
    return {std::move(alpha), b};
}

}  // namespace detail

SvmModel train_rbf_svm(const std::vector<std::vector<double>>& rows,
                       const std::vector<Label>& labels, double gamma, double c,
                       const SmoSettings& settings) {
    const std::size_t n = rows.size();
    if (n == 0 || labels.size() != n) throw ContractError("svm: empty or mismatched training set");
    if (gamma <= 0.0) throw ContractError("svm: gamma must be positive");

    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kernel[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double k = std::exp(-gamma * squared_norm_diff(rows[i], rows[j]));
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }

    detail::SmoResult result = detail::smo_solve(kernel, labels, c, settings);

    SvmModel model;
    model.gamma = gamma;
    model.c = c;
    model.bias = result.bias;
    model.alphas = std::move(result.alpha);
    model.labels = labels;
    model.rows = rows;
    return model;
}

}  // namespace milstack
