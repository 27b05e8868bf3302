#include "milstack/pareto.hpp"

#include <algorithm>
#include <limits>

namespace milstack {

bool dominates(const Objectives& a, const Objectives& b) {
    if (a.first < b.first || a.second < b.second) return false;
    return a.first > b.first || a.second > b.second;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(
    const std::vector<Objectives>& points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated(n);  // S_p
    std::vector<std::size_t> domination_count(n, 0);     // n_p

    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(points[p], points[q]))
                dominated[p].push_back(q);
            else if (dominates(points[q], points[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }

    std::size_t f = 0;
    while (!fronts[f].empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[f]) {
            for (std::size_t q : dominated[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        ++f;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Objectives>& points,
                                      const std::vector<std::size_t>& front) {
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> crowd(n, 0.0);
    if (n <= 2) {
        std::fill(crowd.begin(), crowd.end(), inf);
        return crowd;
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (int obj = 0; obj < 2; ++obj) {
        auto value = [&](std::size_t local) {
            const Objectives& p = points[front[local]];
            return obj == 0 ? p.first : p.second;
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        crowd[order.front()] = inf;
        crowd[order.back()] = inf;
        const double span = value(order.back()) - value(order.front());
        const double scale = span == 0.0 ? 1.0 : span;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (crowd[order[i]] == inf) continue;
            crowd[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / scale;
        }
    }
    return crowd;
}

double hypervolume(const std::vector<Objectives>& points) {
    // keep only the non-dominated, positive-area points
    std::vector<Objectives> front;
    for (const Objectives& p : points) {
        if (p.first <= 0.0 || p.second <= 0.0) continue;
        bool dominated_by_other = false;
        for (const Objectives& q : points)
            if (dominates(q, p)) { dominated_by_other = true; break; }
        if (!dominated_by_other) front.push_back(p);
    }
    std::sort(front.begin(), front.end());
    front.erase(std::unique(front.begin(), front.end()), front.end());

    // sorted by x ascending, y is non-increasing; sweep rectangles from x=0
    double volume = 0.0;
    double prev_x = 0.0;
    for (const Objectives& p : front) {
        volume += (p.first - prev_x) * p.second;
        prev_x = p.first;
    }
    return volume;
}

}  // namespace milstack
