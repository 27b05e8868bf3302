#include "milstack/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "milstack/types.hpp"

namespace milstack {

namespace {

constexpr std::size_t kMuskFeatureCount = 166;
constexpr std::size_t kMuskFieldCount = kMuskFeatureCount + 3;  // mol, conf, class

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_feature(const std::string& field, long line_no) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\r' || end[-1] == '\t')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw IngestError("non-numeric feature value '" + field + "'", line_no);
    if (!std::isfinite(value))
        throw IngestError("non-finite feature value '" + field + "'", line_no);
    return value;
}

}  // namespace

void validate_dataset(const Dataset& data) {
    std::unordered_set<std::string> ids;
    for (const Bag& bag : data.bags) {
        if (bag.instances.empty())
            throw ContractError("bag '" + bag.id + "' has no instances");
        if (bag.label != kPositive && bag.label != kNegative)
            throw ContractError("bag '" + bag.id + "' has label outside {-1,+1}");
        if (!ids.insert(bag.id).second)
            throw ContractError("duplicate bag id '" + bag.id + "'");
        for (const Instance& inst : bag.instances) {
            if (inst.size() != data.dimensionality)
                throw ContractError("bag '" + bag.id + "' instance dimensionality " +
                                    std::to_string(inst.size()) + " != " +
                                    std::to_string(data.dimensionality));
            for (double v : inst)
                if (!std::isfinite(v))
                    throw ContractError("bag '" + bag.id + "' has a non-finite feature");
        }
    }
    if (!data.normalization.empty() && data.normalization.size() != data.dimensionality)
        throw ContractError("normalization length does not match dimensionality");
}

void require_both_classes(const Dataset& data) {
    if (data.count_label(kPositive) == 0 || data.count_label(kNegative) == 0)
        throw ContractError("training requires at least one bag of each class");
}

Dataset load_musk_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    return load_musk_csv(in, path);
}

Dataset load_musk_csv(std::istream& in, const std::string& origin) {
    Dataset data;
    data.dimensionality = kMuskFeatureCount;

    std::unordered_map<std::string, std::size_t> bag_index;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields = split_csv(line);
        if (fields.size() != kMuskFieldCount)
            throw IngestError("expected " + std::to_string(kMuskFieldCount) + " fields, got " +
                                  std::to_string(fields.size()),
                              line_no);

        const std::string& molecule = fields[0];
        Instance features(kMuskFeatureCount);
        for (std::size_t f = 0; f < kMuskFeatureCount; ++f)
            features[f] = parse_feature(fields[2 + f], line_no);

        // UCI rows end the class flag with a period ("1."); tolerate it
        const std::string& class_field = fields.back();
        std::string trimmed = class_field;
        trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(),
                                     [](char c) { return c == ' ' || c == '.'; }),
                      trimmed.end());
        Label label;
        if (trimmed == "1")
            label = kPositive;
        else if (trimmed == "0")
            label = kNegative;
        else
            throw IngestError("class flag must be 0 or 1, got '" + class_field + "'", line_no);

        auto [it, inserted] = bag_index.emplace(molecule, data.bags.size());
        if (inserted) {
            Bag bag;
            bag.id = molecule;
            bag.label = label;
            data.bags.push_back(std::move(bag));
        } else if (data.bags[it->second].label != label) {
            throw DataIntegrityError("molecule '" + molecule + "' in '" + origin +
                                     "' carries inconsistent class flags (line " +
                                     std::to_string(line_no) + ")");
        }
        data.bags[it->second].instances.push_back(std::move(features));
    }

    if (data.bags.empty()) throw IngestError("no data rows in '" + origin + "'");
    validate_dataset(data);
    return data;
}

namespace {

// x -> (x - lo) / (hi - lo), with the degenerate hi == lo range mapping to 0.
double rescale(double x, double lo, double hi) {
    if (hi == lo) return 0.0;
    return (x - lo) / (hi - lo);
}

// Composes an outer (raw -> current) map with an inner (current -> [0,1])
// map so the recorded ranges always translate raw feature space directly.
std::pair<double, double> compose_ranges(std::pair<double, double> outer,
                                         std::pair<double, double> inner) {
    auto [lo1, hi1] = outer;
    auto [lo2, hi2] = inner;
    if (hi1 == lo1) return outer;                    // already constant -> 0
    if (hi2 == lo2) return {lo1, lo1};               // collapsed this pass
    // (x-lo1)/(hi1-lo1) lands in [lo2,hi2]; solve for the raw endpoints
    double span1 = hi1 - lo1;
    return {lo1 + lo2 * span1, lo1 + hi2 * span1};
}

}  // namespace

Dataset normalize_minmax(const Dataset& data) {
    if (data.bags.empty()) throw ContractError("cannot normalize an empty dataset");
    const std::size_t m = data.dimensionality;

    Normalization ranges(m, {std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()});
    for (const Bag& bag : data.bags)
        for (const Instance& inst : bag.instances)
            for (std::size_t f = 0; f < m; ++f) {
                ranges[f].first = std::min(ranges[f].first, inst[f]);
                ranges[f].second = std::max(ranges[f].second, inst[f]);
            }

    Dataset out;
    out.dimensionality = m;
    out.bags.reserve(data.bags.size());
    for (const Bag& bag : data.bags) {
        Bag nb;
        nb.id = bag.id;
        nb.label = bag.label;
        nb.instances.reserve(bag.instances.size());
        for (const Instance& inst : bag.instances) {
            Instance scaled(m);
            for (std::size_t f = 0; f < m; ++f)
                scaled[f] = rescale(inst[f], ranges[f].first, ranges[f].second);
            nb.instances.push_back(std::move(scaled));
        }
        out.bags.push_back(std::move(nb));
    }

    if (data.normalization.empty()) {
        out.normalization = std::move(ranges);
    } else {
        out.normalization.resize(m);
        for (std::size_t f = 0; f < m; ++f)
            out.normalization[f] = compose_ranges(data.normalization[f], ranges[f]);
    }
    return out;
}

Bag apply_normalization(const Bag& bag, const Normalization& normalization) {
    if (bag.dimensionality() != normalization.size())
        throw ContractError("bag dimensionality " + std::to_string(bag.dimensionality()) +
                            " does not match normalization length " +
                            std::to_string(normalization.size()));
    Bag out;
    out.id = bag.id;
    out.label = bag.label;
    out.instances.reserve(bag.instances.size());
    for (const Instance& inst : bag.instances) {
        Instance scaled(inst.size());
        for (std::size_t f = 0; f < inst.size(); ++f) {
            double v = rescale(inst[f], normalization[f].first, normalization[f].second);
            scaled[f] = std::clamp(v, 0.0, 1.0);
        }
        out.instances.push_back(std::move(scaled));
    }
    return out;
}

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices, std::size_t dimensionality)
    : indices_(std::move(indices)), dimensionality_(dimensionality) {
    if (indices_.empty()) throw ContractError("feature subset must be non-empty");
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (indices_.back() >= dimensionality_)
        throw ContractError("feature index " + std::to_string(indices_.back()) +
                            " out of range for dimensionality " + std::to_string(dimensionality_));
}

FeatureSubset FeatureSubset::full(std::size_t dimensionality) {
    std::vector<std::size_t> all(dimensionality);
    for (std::size_t i = 0; i < dimensionality; ++i) all[i] = i;
    return FeatureSubset(std::move(all), dimensionality);
}

FeatureSubset FeatureSubset::from_mask(const std::vector<bool>& mask) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) indices.push_back(i);
    return FeatureSubset(std::move(indices), mask.size());
}

std::vector<bool> FeatureSubset::to_mask() const {
    std::vector<bool> mask(dimensionality_, false);
    for (std::size_t i : indices_) mask[i] = true;
    return mask;
}

}  // namespace milstack
