#include "milstack/cnn.hpp"

#include <algorithm>
#include <vector>

namespace milstack {

namespace {

void check_params(const CnnParams& params, std::size_t train_count) {
    const long t = static_cast<long>(train_count);
    if (params.eta_r < 1 || params.eta_r > t - 1)
        throw ContractError("eta_r must satisfy 1 <= eta_r <= T-1 (T=" + std::to_string(t) + ")");
    if (params.eta_c < 1 || params.eta_c > t - 1)
        throw ContractError("eta_c must satisfy 1 <= eta_c <= T-1 (T=" + std::to_string(t) + ")");
    if (params.d.d < 1) throw ContractError("rank parameter must be >= 1");
    if (!(params.theta > 0.0 && params.theta < 1.0))
        throw ContractError("theta must lie in the open interval (0,1)");
}

}  // namespace

std::vector<Label> dataset_labels(const Dataset& data) {
    std::vector<Label> labels;
    labels.reserve(data.size());
    for (const Bag& bag : data.bags) labels.push_back(bag.label);
    return labels;
}

NeighbourCounts find_references(const DistanceMatrix& matrix, const std::vector<Label>& labels,
                                int eta_r) {
    const std::size_t t = matrix.train_count();
    if (eta_r < 1 || static_cast<std::size_t>(eta_r) > t)
        throw ContractError("eta_r out of range for T=" + std::to_string(t));

    // sort (distance, index); equal distances fall to the lower bag index
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(t);
    for (std::size_t j = 0; j < t; ++j) order.emplace_back(matrix(matrix.test_row(), j), j);
    std::sort(order.begin(), order.end());

    NeighbourCounts counts;
    for (int k = 0; k < eta_r; ++k) {
        if (labels[order[k].second] == kPositive)
            ++counts.pos_refs;
        else
            ++counts.neg_refs;
    }
    return counts;
}

NeighbourCounts find_citers(const DistanceMatrix& matrix, const std::vector<Label>& labels,
                            int eta_c) {
    const std::size_t t = matrix.train_count();
    if (eta_c < 1 || static_cast<std::size_t>(eta_c) > t)
        throw ContractError("eta_c out of range for T=" + std::to_string(t));

    NeighbourCounts counts;
    for (std::size_t j = 0; j < t; ++j) {
        const double test_dist = matrix(matrix.test_row(), j);
        // rank of the test entry within column j, self-distance excluded;
        // the test row has the highest index so every tie outranks it
        int rank = 0;
        for (std::size_t r = 0; r < t; ++r) {
            if (r == j) continue;
            if (matrix(r, j) <= test_dist) ++rank;
        }
        if (rank < eta_c) {
            if (labels[j] == kPositive)
                ++counts.pos_citers;
            else
                ++counts.neg_citers;
        }
    }
    return counts;
}

CnnPrediction score_counts(const NeighbourCounts& counts, double theta) {
    CnnPrediction out;
    out.counts = counts;
    const int total = counts.total();
    out.score = total > 0 ? static_cast<double>(counts.positives()) / total : 0.0;
    out.label = (total > 0 && out.score >= theta) ? kPositive : kNegative;
    return out;
}

CnnPrediction cnn_classify(const Dataset& train, const CnnParams& params, const Bag& test,
                           unsigned jobs) {
    if (train.size() < 2) throw ContractError("cnn_classify requires at least 2 training bags");
    check_params(params, train.size());
    if (test.dimensionality() != train.dimensionality)
        throw ContractError("test bag dimensionality does not match training set");

    DistanceMatrix matrix = build_distance_matrix(train, test, params.d, params.s, jobs);
    std::vector<Label> labels = dataset_labels(train);

    NeighbourCounts counts = find_references(matrix, labels, params.eta_r);
    NeighbourCounts citers = find_citers(matrix, labels, params.eta_c);
    counts.pos_citers = citers.pos_citers;
    counts.neg_citers = citers.neg_citers;
    return score_counts(counts, params.theta);
}

}  // namespace milstack
