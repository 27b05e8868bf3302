#ifndef MILSTACK_TESTS_SUPPORT_HPP
#define MILSTACK_TESTS_SUPPORT_HPP

#include <string>
#include <vector>

#include "milstack/rng.hpp"
#include "milstack/types.hpp"

namespace testsupport {

using milstack::Bag;
using milstack::Dataset;
using milstack::Instance;
using milstack::Label;
using milstack::Rng;

// 1-D bag from a list of scalar feature values
inline Bag bag1d(std::string id, std::vector<double> values, Label label) {
    Bag bag;
    bag.id = std::move(id);
    bag.label = label;
    for (double v : values) bag.instances.push_back(Instance{v});
    return bag;
}

inline Dataset dataset_of(std::vector<Bag> bags, std::size_t dimensionality) {
    Dataset data;
    data.bags = std::move(bags);
    data.dimensionality = dimensionality;
    return data;
}

inline Bag random_bag(Rng& rng, std::string id, std::size_t dims, std::size_t max_instances,
                      Label label, double lo = 0.0, double hi = 1.0) {
    Bag bag;
    bag.id = std::move(id);
    bag.label = label;
    std::size_t count = 1 + rng.next_index(max_instances);
    for (std::size_t i = 0; i < count; ++i) {
        Instance inst(dims);
        for (double& v : inst) v = rng.next_real(lo, hi);
        bag.instances.push_back(std::move(inst));
    }
    return bag;
}

// Random dataset with at least two bags of each class (so every
// leave-one-out or k = N training portion keeps both classes).
inline Dataset random_dataset(Rng& rng, std::size_t n_bags, std::size_t dims,
                              std::size_t max_instances) {
    Dataset data;
    data.dimensionality = dims;
    for (std::size_t i = 0; i < n_bags; ++i) {
        Label label = (i < 4) ? (i % 2 == 0 ? milstack::kPositive : milstack::kNegative)
                              : (rng.next_bool(0.5) ? milstack::kPositive : milstack::kNegative);
        data.bags.push_back(random_bag(rng, "bag" + std::to_string(i), dims, max_instances, label));
    }
    return data;
}

// Two well-separated 1-D clusters; positives near 1, negatives near 0.
// With eta_r = eta_c = 1, d = 1, theta = 0.5 a CNN gets every LOO fold right.
inline Dataset separable_dataset(std::size_t per_class, double jitter = 0.02) {
    Dataset data;
    data.dimensionality = 1;
    Rng rng(7777);
    for (std::size_t i = 0; i < per_class; ++i) {
        data.bags.push_back(bag1d("pos" + std::to_string(i),
                                  {1.0 + jitter * rng.next_real(), 0.95 + jitter * rng.next_real()},
                                  milstack::kPositive));
    }
    for (std::size_t i = 0; i < per_class; ++i) {
        data.bags.push_back(bag1d("neg" + std::to_string(i),
                                  {0.0 + jitter * rng.next_real(), 0.05 + jitter * rng.next_real()},
                                  milstack::kNegative));
    }
    return data;
}

}  // namespace testsupport

#endif
