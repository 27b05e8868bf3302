#ifndef MILSTACK_DATASET_HPP
#define MILSTACK_DATASET_HPP

#include <iosfwd>
#include <string>

#include "milstack/types.hpp"

namespace milstack {

// Reads the UCI Musk "clean1" layout: comma-separated rows with no header,
// each row = molecule name, conformation name, 166 integer features, class
// flag 0/1. Rows are grouped into bags by molecule name (file order kept);
// class 1 maps to +1, class 0 to -1.
//
// Throws IngestError for malformed rows (naming the line) and
// DataIntegrityError when one molecule carries both class flags.
Dataset load_musk_csv(const std::string& path);
Dataset load_musk_csv(std::istream& in, const std::string& origin = "<stream>");

// Rescales every feature to [0,1] by min/max over all instances in all bags.
// A constant feature maps to 0. The raw-space (min,max) pairs are recorded in
// the result so the same map can be applied to unseen bags later. Normalizing
// an already-normalized dataset composes the maps, which makes the operation
// idempotent including the recorded ranges.
Dataset normalize_minmax(const Dataset& data);

// Applies recorded training-time scaling to one bag, clamping to [0,1] for
// values outside the training range. A (lo, lo) degenerate range maps to 0.
// Throws ContractError when bag dimensionality does not match.
Bag apply_normalization(const Bag& bag, const Normalization& normalization);

}  // namespace milstack

#endif
