#ifndef MILSTACK_PARETO_HPP
#define MILSTACK_PARETO_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace milstack {

// (Acc+, Acc-) pair, both maximized, both in [0,1].
using Objectives = std::pair<double, double>;

// Standard Pareto dominance for maximization: a >= b componentwise and
// strictly better in at least one. Equal points do not dominate.
bool dominates(const Objectives& a, const Objectives& b);

// Partitions indices 0..n-1 into fronts F0, F1, ... where members of Fk are
// dominated only by members of earlier fronts. Every index appears in exactly
// one front.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(
    const std::vector<Objectives>& points);

// Crowding distance for one front (indices into points). Boundary members of
// each objective get +infinity, so fronts of size <= 2 are all +infinity;
// interior members get the sum of normalized neighbour gaps per objective.
std::vector<double> crowding_distance(const std::vector<Objectives>& points,
                                      const std::vector<std::size_t>& front);

// Area of objective space dominated by the points, reference (0,0).
// Dominated points contribute nothing.
double hypervolume(const std::vector<Objectives>& points);

}  // namespace milstack

#endif
