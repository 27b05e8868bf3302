#ifndef MILSTACK_IO_HPP
#define MILSTACK_IO_HPP

#include <cstdint>
#include <string>

#include "milstack/nsga2.hpp"
#include "milstack/stacking.hpp"
#include "milstack/types.hpp"
#include "milstack/validation.hpp"

namespace milstack {

// Stamped into every artifact under the "meta" key.
struct ArtifactMeta {
    std::string tool_version;    // e.g. "milstack 0.1.0"
    std::uint64_t seed = 0;
    std::string config_digest;   // FNV-1a hex over the canonical settings JSON

    static ArtifactMeta make(std::uint64_t seed, const std::string& settings_json);
};

// FNV-1a 64-bit hex digest of an arbitrary string.
std::string fnv1a_hex(const std::string& text);

// Canonical dataset document: {dimensionality, normalization,
// bags:[{id,label,instances:[[...]]}]} (+ meta). Doubles are written with
// shortest round-trip precision, so save/load is bit-exact.
void save_dataset(const std::string& path, const Dataset& data, const ArtifactMeta& meta);
Dataset load_dataset(const std::string& path);

// True when the file looks like a canonical JSON dataset rather than a raw
// musk CSV (first non-space byte is '{').
bool looks_like_canonical_dataset(const std::string& path);

// CnnParams object: {eta_r, eta_c, d, theta, features:[0-based indices]}.
std::string cnn_params_to_json(const CnnParams& params);
CnnParams cnn_params_from_json_file(const std::string& path, std::size_t dimensionality);

// GA config: {population, generations, crossover_prob, mutation_prob,
// eta_max, d_max, seed}. Missing keys keep their defaults.
GaConfig ga_config_from_json_text(const std::string& text);
std::string ga_config_to_json(const GaConfig& config);

// Stage-1 front file: {meta, front:[{params, acc_pos, acc_neg}]}.
void save_front(const std::string& path, const ParetoFront& front, const ArtifactMeta& meta);
ParetoFront load_front(const std::string& path, std::size_t dimensionality);

// Stage-2 front file: {meta, front:[{params:{gamma,c,members}, acc_pos, acc_neg}]}.
void save_stack_front(const std::string& path, const StackFront& front, std::size_t columns,
                      const ArtifactMeta& meta);

// Stacked model: {meta, members:[CnnParams...], gamma, c, alphas, bias,
// normalization}. meta_rows are rebuilt from the training data on load.
void save_stacked_model(const std::string& path, const StackedModel& model,
                        const ArtifactMeta& meta);
StackedModel load_stacked_model(const std::string& path, std::size_t dimensionality);

// Validation report: {acc_pos, acc_neg, scheme, predictions:[+-1,...]} (+ meta).
void save_validation_report(const std::string& path, const ValidationReport& report,
                            const ArtifactMeta& meta);

// Report rows: Class 0 accuracy | Class 1 accuracy | # Models, percentages
// to two decimals, grouped by identical accuracy pairs and sorted by Class 0
// accuracy descending.
struct AccuracyTableRow {
    double acc_neg = 0.0;  // Class 0
    double acc_pos = 0.0;  // Class 1
    int model_count = 0;
};
std::vector<AccuracyTableRow> accuracy_table(const std::vector<Objectives>& points);
std::string accuracy_table_markdown(const std::vector<AccuracyTableRow>& rows);
std::string accuracy_table_csv(const std::vector<AccuracyTableRow>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace milstack

#endif
