#ifndef MILSTACK_CNN_HPP
#define MILSTACK_CNN_HPP

#include <cstddef>
#include <vector>

#include "milstack/hausdorff.hpp"
#include "milstack/types.hpp"

namespace milstack {

// Full parameterization of one Citation Nearest Neighbour classifier.
struct CnnParams {
    int eta_r = 2;        // reference neighbourhood size, 1 <= eta_r <= T-1
    int eta_c = 4;        // citer neighbourhood size, 1 <= eta_c <= T-1
    RankParameter d{1};   // rank in the directed bag distance
    FeatureSubset s;      // feature coordinates used by the instance metric
    double theta = 0.5;   // classification threshold, in (0,1)

    bool operator==(const CnnParams& other) const {
        return eta_r == other.eta_r && eta_c == other.eta_c && d.d == other.d.d &&
               s == other.s && theta == other.theta;
    }
};

struct NeighbourCounts {
    int pos_refs = 0;
    int neg_refs = 0;
    int pos_citers = 0;
    int neg_citers = 0;

    int total() const { return pos_refs + neg_refs + pos_citers + neg_citers; }
    int positives() const { return pos_refs + pos_citers; }
};

struct CnnPrediction {
    Label label = kNegative;
    double score = 0.0;  // (pos refs + pos citers) / all refs and citers
    NeighbourCounts counts;
};

// References: the eta_r training bags closest to the test bag (row T of the
// matrix). Distance ties go to the lower bag index. Returns the positive and
// negative label counts among them.
NeighbourCounts find_references(const DistanceMatrix& matrix, const std::vector<Label>& labels,
                                int eta_r);

// Citers: training bag i cites the test bag iff the test entry ranks within
// the eta_c smallest values of column i, excluding the self-distance on the
// diagonal. Rank ties go to the lower row index, so an equally distant
// training bag always outranks the test bag. Adds the citer counts into a
// fresh NeighbourCounts.
NeighbourCounts find_citers(const DistanceMatrix& matrix, const std::vector<Label>& labels,
                            int eta_c);

// Score and threshold per the CNN rule: label +1 iff score >= theta (the
// boundary is inclusive). Denominator is positive whenever eta_r >= 1.
CnnPrediction score_counts(const NeighbourCounts& counts, double theta);

// The whole classifier: build the distance matrix, count references and
// citers, threshold. Throws ContractError for parameter/dimension misuse.
CnnPrediction cnn_classify(const Dataset& train, const CnnParams& params, const Bag& test,
                           unsigned jobs = 1);

std::vector<Label> dataset_labels(const Dataset& data);

}  // namespace milstack

#endif
