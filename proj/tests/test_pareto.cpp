#include <doctest.h>

#include <limits>

#include "milstack/pareto.hpp"
#include "milstack/rng.hpp"
#include "oracles.hpp"

using namespace milstack;

TEST_CASE("dominance relation") {
    CHECK(dominates({1.0, 0.9}, {0.9, 0.9}));
    CHECK_FALSE(dominates({1.0, 0.5}, {0.5, 1.0}));
    CHECK_FALSE(dominates({0.5, 1.0}, {1.0, 0.5}));
    CHECK_FALSE(dominates({0.7, 0.7}, {0.7, 0.7}));
    CHECK(dominates({0.8, 0.8}, {0.7, 0.7}));
    CHECK_FALSE(dominates({0.7, 0.7}, {0.8, 0.8}));
}

TEST_CASE("non-dominated sorting examples") {
    SUBCASE("singleton") {
        auto fronts = fast_nondominated_sort({{1.0, 1.0}});
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0] == std::vector<std::size_t>{0});
    }
    SUBCASE("one dominator, two incomparable dominated points") {
        auto fronts = fast_nondominated_sort({{1.0, 1.0}, {0.5, 0.5}, {0.75, 0.25}});
        REQUIRE(fronts.size() == 2);
        CHECK(fronts[0] == std::vector<std::size_t>{0});
        CHECK(fronts[1] == std::vector<std::size_t>{1, 2});
    }
    SUBCASE("identical points share one front") {
        auto fronts = fast_nondominated_sort({{0.4, 0.4}, {0.4, 0.4}, {0.4, 0.4}});
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0].size() == 3);
    }
}

TEST_CASE("non-dominated sorting agrees with repeated extraction") {
    Rng rng(1515);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng.next_index(50);
        std::vector<Objectives> points(n);
        for (auto& p : points) {
            // quantized coordinates produce plenty of ties and duplicates
            p.first = rng.next_index(5) / 4.0;
            p.second = rng.next_index(5) / 4.0;
        }
        auto fast = fast_nondominated_sort(points);
        auto naive = oracle::nondominated_fronts(points);
        CAPTURE(trial);
        REQUIRE(fast.size() == naive.size());
        for (std::size_t f = 0; f < fast.size(); ++f) {
            auto a = fast[f];
            auto b = naive[f];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            REQUIRE(a == b);
        }
    }
}

TEST_CASE("crowding distance") {
    const double inf = std::numeric_limits<double>::infinity();
    SUBCASE("tiny fronts are all infinite") {
        CHECK(crowding_distance({{0.3, 0.7}}, {0}) == std::vector<double>{inf});
        auto two = crowding_distance({{0.3, 0.7}, {0.7, 0.3}}, {0, 1});
        CHECK(two == std::vector<double>{inf, inf});
    }
    SUBCASE("interior member sums normalized gaps") {
        auto crowd = crowding_distance({{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}}, {0, 1, 2});
        CHECK(crowd[0] == inf);
        CHECK(crowd[2] == inf);
        CHECK(crowd[1] == doctest::Approx(2.0));
    }
}

TEST_CASE("hypervolume with reference (0,0)") {
    CHECK(hypervolume({}) == 0.0);
    CHECK(hypervolume({{1.0, 0.9}}) == doctest::Approx(0.9));
    CHECK(hypervolume({{0.5, 1.0}, {1.0, 0.8}}) == doctest::Approx(0.9));
    // dominated point adds nothing
    CHECK(hypervolume({{0.5, 1.0}, {1.0, 0.8}, {0.4, 0.4}}) == doctest::Approx(0.9));
    // duplicates add nothing
    CHECK(hypervolume({{1.0, 1.0}, {1.0, 1.0}}) == doctest::Approx(1.0));

    // monotone: adding any point never shrinks the volume
    Rng rng(1616);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Objectives> points;
        for (int i = 0; i < 6; ++i) points.emplace_back(rng.next_real(), rng.next_real());
        double base = hypervolume(points);
        points.emplace_back(rng.next_real(), rng.next_real());
        CHECK(hypervolume(points) >= base - 1e-12);
    }
}
