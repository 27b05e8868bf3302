#ifndef MILSTACK_TYPES_HPP
#define MILSTACK_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace milstack {

// Thrown when a caller violates an operation's preconditions.
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown on malformed input files; carries the offending line when known.
class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& msg, long line = -1)
        : std::runtime_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Thrown when file contents are well-formed but self-contradictory,
// e.g. one molecule carrying both class flags.
class DataIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bag and instance labels: -1 (negative, "Class 0") or +1 (positive, "Class 1").
using Label = int;

inline constexpr Label kPositive = +1;
inline constexpr Label kNegative = -1;

// One feature vector. All instances in a dataset share dimensionality m.
using Instance = std::vector<double>;

struct Bag {
    std::string id;
    std::vector<Instance> instances;
    Label label = kNegative;

    std::size_t size() const { return instances.size(); }
    std::size_t dimensionality() const {
        return instances.empty() ? 0 : instances.front().size();
    }
};

// Per-feature (min, max) observed at normalization time. Empty when the
// dataset has not been normalized.
using Normalization = std::vector<std::pair<double, double>>;

struct Dataset {
    std::vector<Bag> bags;
    std::size_t dimensionality = 0;
    Normalization normalization;  // raw-space ranges; empty if unnormalized

    std::size_t size() const { return bags.size(); }
    std::size_t instance_count() const {
        std::size_t n = 0;
        for (const Bag& b : bags) n += b.size();
        return n;
    }
    std::size_t count_label(Label y) const {
        std::size_t n = 0;
        for (const Bag& b : bags)
            if (b.label == y) ++n;
        return n;
    }
};

// Subset of feature coordinates used by the instance metric. Indices are
// 0-based and kept sorted; never empty for a valid subset.
class FeatureSubset {
public:
    FeatureSubset() = default;
    FeatureSubset(std::vector<std::size_t> indices, std::size_t dimensionality);

    // All m coordinates.
    static FeatureSubset full(std::size_t dimensionality);
    // From a bitmask (one bool per coordinate, true = selected).
    static FeatureSubset from_mask(const std::vector<bool>& mask);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t dimensionality() const { return dimensionality_; }
    std::size_t count() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    std::vector<bool> to_mask() const;

    bool operator==(const FeatureSubset& other) const = default;

private:
    std::vector<std::size_t> indices_;
    std::size_t dimensionality_ = 0;
};

// Validates the bag/dataset invariants the rest of the pipeline relies on:
// non-empty bags, consistent dimensionality, finite values, unique bag ids.
void validate_dataset(const Dataset& data);

// Checks that both classes are present; required before any training use.
void require_both_classes(const Dataset& data);

}  // namespace milstack

#endif
