#ifndef MILSTACK_STACKING_HPP
#define MILSTACK_STACKING_HPP

#include <cstdint>
#include <vector>

#include "milstack/cnn.hpp"
#include "milstack/nsga2.hpp"
#include "milstack/svm.hpp"
#include "milstack/types.hpp"
#include "milstack/validation.hpp"

namespace milstack {

// Second-level training sample: column j holds the leave-one-out predictions
// of ensemble member j, rows aligned to dataset bag order.
struct MetaDataset {
    std::vector<std::vector<Label>> t2;      // N rows x J columns, entries in {-1,+1}
    std::vector<Label> labels;               // per-row bag label
    std::vector<CnnParams> column_params;    // J

    std::size_t rows() const { return t2.size(); }
    std::size_t columns() const { return column_params.size(); }
};

// Runs loo_validate for every front member and assembles the N x J matrix.
// Rebuilding from the same front yields a bit-identical matrix.
MetaDataset build_meta_dataset(const Dataset& train, const ParetoFront& front,
                               unsigned jobs = 1);

// Stacking-stage genome: kernel coefficient and regularization on log10
// scales (gamma in [1e-3,1e3], c in [1e-2,1e3]) plus a member-subset mask
// with at least one bit set.
struct StackGenome {
    double log_gamma = 0.0;
    double log_c = 0.0;
    std::vector<std::uint8_t> member_mask;

    double gamma() const;
    double c() const;
    std::vector<std::size_t> selected() const;
};

struct StackFrontMember {
    StackGenome genome;
    double acc_pos = 0.0;
    double acc_neg = 0.0;
};

struct StackFront {
    std::vector<StackFrontMember> members;

    bool empty() const { return members.empty(); }
    std::vector<Objectives> objectives() const {
        std::vector<Objectives> out;
        out.reserve(members.size());
        for (const auto& m : members) out.emplace_back(m.acc_pos, m.acc_neg);
        return out;
    }
};

// Trains the second-level classifier on the meta rows (each row cast to a
// +-1 double vector). Throws ContractError when labels are single-class.
SvmModel train_final(const MetaDataset& meta, double gamma, double c);

// Per-row leave-one-out estimate of a stacking configuration: the member
// columns stay fixed (they are already out-of-fold); only the second-level
// classifier is retrained per fold. An optimistic estimate by construction.
ValidationReport stack_loo_report(const MetaDataset& meta, const StackGenome& genome,
                                  unsigned jobs = 1);

// NSGA-II over (gamma, c, member subset), objectives = LOO (Acc+, Acc-) of
// the second-level classifier over meta rows. config.eta_max / d_max are
// ignored. Deterministic given config.seed.
StackFront tune_stack(const MetaDataset& meta, const GaConfig& config, unsigned jobs = 1);

// Ensemble members plus the trained second-level classifier and the
// training-time feature scaling. meta_rows/row_labels are the second-level
// training sample (reconstructable from members + training data, so they are
// not part of the serialized form).
struct StackedModel {
    std::vector<CnnParams> members;
    double gamma = 1.0;
    double c = 1.0;
    double bias = 0.0;
    std::vector<double> alphas;              // per training bag
    Normalization normalization;
    std::vector<std::vector<Label>> meta_rows;  // N x |members|
    std::vector<Label> row_labels;

    bool ready() const { return !meta_rows.empty(); }
};

// Builds the final model for one chosen stacking configuration: restricts the
// meta matrix to the selected columns and trains F on all rows.
StackedModel assemble_stacked_model(const Dataset& train, const MetaDataset& meta,
                                    const StackGenome& choice);

// Rebuilds meta_rows/row_labels for a deserialized model (the LOO columns of
// its members over the training sample).
void rehydrate_stacked_model(StackedModel& model, const Dataset& train, unsigned jobs = 1);

// Prediction on an unseen bag: every member classifies the test bag
// against the full training sample, then F maps the member labels to the
// final label. The bag must already be in the model's normalized space.
Label predict_bag(const StackedModel& model, const Dataset& train, const Bag& test,
                  unsigned jobs = 1);

// Member labels for one bag (the J-vector fed to F); exposed for reports.
std::vector<Label> member_predictions(const StackedModel& model, const Dataset& train,
                                      const Bag& test, unsigned jobs = 1);

}  // namespace milstack

#endif
