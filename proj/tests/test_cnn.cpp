#include <doctest.h>

#include "milstack/cnn.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace milstack;
using testsupport::bag1d;

namespace {

DistanceMatrix matrix_from(std::vector<std::vector<double>> rows) {
    const std::size_t t = rows.front().size();
    DistanceMatrix m(t);
    for (std::size_t i = 0; i <= t; ++i)
        for (std::size_t j = 0; j < t; ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

TEST_CASE("reference counting") {
    SUBCASE("two nearest of three") {
        DistanceMatrix m = matrix_from({{0, 5, 5}, {5, 0, 5}, {5, 5, 0}, {1, 2, 3}});
        NeighbourCounts counts = find_references(m, {kPositive, kPositive, kNegative}, 2);
        CHECK(counts.pos_refs == 2);
        CHECK(counts.neg_refs == 0);
    }
    SUBCASE("eta_r = T tallies every training label") {
        DistanceMatrix m = matrix_from({{0, 5, 5}, {5, 0, 5}, {5, 5, 0}, {3, 1, 2}});
        NeighbourCounts counts = find_references(m, {kPositive, kNegative, kNegative}, 3);
        CHECK(counts.pos_refs == 1);
        CHECK(counts.neg_refs == 2);
    }
    SUBCASE("equal distances break toward the lower index") {
        DistanceMatrix m = matrix_from({{0, 4}, {4, 0}, {2, 2}});
        NeighbourCounts counts = find_references(m, {kPositive, kNegative}, 1);
        CHECK(counts.pos_refs == 1);
        CHECK(counts.neg_refs == 0);
    }
}

TEST_CASE("citer counting") {
    SUBCASE("a single training bag always cites the test bag") {
        DistanceMatrix m = matrix_from({{0}, {7}});
        NeighbourCounts pos = find_citers(m, {kPositive}, 1);
        CHECK(pos.pos_citers == 1);
        CHECK(pos.neg_citers == 0);
        NeighbourCounts neg = find_citers(m, {kNegative}, 1);
        CHECK(neg.pos_citers == 0);
        CHECK(neg.neg_citers == 1);
    }
    SUBCASE("test bag nearer than any train-train pair cites everywhere") {
        DistanceMatrix m =
            matrix_from({{0, 10, 10}, {10, 0, 10}, {10, 10, 0}, {1, 1, 1}});
        NeighbourCounts counts = find_citers(m, {kPositive, kNegative, kPositive}, 1);
        CHECK(counts.pos_citers == 2);
        CHECK(counts.neg_citers == 1);
    }
    SUBCASE("test bag farther than every neighbourhood collects no citers") {
        DistanceMatrix m =
            matrix_from({{0, 10, 10}, {10, 0, 10}, {10, 10, 0}, {1000, 1000, 1000}});
        NeighbourCounts counts = find_citers(m, {kPositive, kNegative, kPositive}, 1);
        CHECK(counts.pos_citers == 0);
        CHECK(counts.neg_citers == 0);
    }
    SUBCASE("tie with a training row outranks the test row") {
        // column 0: train entry at distance 5 (row 1), test also at 5
        DistanceMatrix m = matrix_from({{0, 5}, {5, 0}, {5, 9}});
        NeighbourCounts counts = find_citers(m, {kPositive, kNegative}, 1);
        CHECK(counts.pos_citers == 0);  // bag 0's slot went to bag 1
        CHECK(counts.neg_citers == 0);  // bag 1's neighbourhood holds bag 0 (dist 5 < 9)
    }
}

TEST_CASE("score and threshold rule") {
    SUBCASE("direct substitution") {
        NeighbourCounts counts{2, 1, 1, 0};
        CnnPrediction p = score_counts(counts, 0.5);
        CHECK(p.score == 0.75);
        CHECK(p.label == kPositive);
    }
    SUBCASE("boundary score equal to theta is positive") {
        NeighbourCounts counts{1, 1, 1, 1};
        CnnPrediction p = score_counts(counts, 0.5);
        CHECK(p.score == 0.5);
        CHECK(p.label == kPositive);
    }
    SUBCASE("below threshold is negative") {
        NeighbourCounts counts{1, 2, 0, 1};
        CnnPrediction p = score_counts(counts, 0.5);
        CHECK(p.score == 0.25);
        CHECK(p.label == kNegative);
    }
}

TEST_CASE("full classifier on a hand-traced 1-D problem") {
    // two tight positive bags next to the test bag, one negative far away
    Dataset train = testsupport::dataset_of({bag1d("p1", {1.0, 1.1}, kPositive),
                                             bag1d("p2", {0.9, 1.0}, kPositive),
                                             bag1d("n1", {8.0, 8.2}, kNegative)},
                                            1);
    CnnParams params;
    params.eta_r = 2;
    params.eta_c = 2;
    params.d = RankParameter{1};
    params.s = FeatureSubset::full(1);
    params.theta = 0.5;

    CnnPrediction p = cnn_classify(train, params, bag1d("x", {1.05}, kNegative));
    CHECK(p.label == kPositive);
    CHECK(p.counts.pos_refs == 2);

    SUBCASE("dimensionality mismatch is a contract error") {
        Bag wrong;
        wrong.id = "w";
        wrong.label = kNegative;
        wrong.instances.push_back(Instance{1.0, 2.0});
        CHECK_THROWS_AS(cnn_classify(train, params, wrong), ContractError);
    }
    SUBCASE("eta bounds are enforced") {
        CnnParams bad = params;
        bad.eta_r = 3;  // T-1 = 2
        CHECK_THROWS_AS(cnn_classify(train, bad, bag1d("x", {1.0}, kNegative)), ContractError);
    }
}

TEST_CASE("agreement with an independently coded naive classifier") {
    testsupport::Rng rng(909);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t t = 3 + rng.next_index(6);  // 3..8 training bags
        Dataset train = testsupport::random_dataset(rng, t, 1, 4);
        Bag test = testsupport::random_bag(rng, "x", 1, 4, kPositive);
        std::vector<Label> labels = dataset_labels(train);

        for (int eta_r = 1; eta_r <= 3 && eta_r + 1 < static_cast<int>(t); ++eta_r)
            for (int eta_c = 1; eta_c <= 3 && eta_c + 1 < static_cast<int>(t); ++eta_c)
                for (int d = 1; d <= 3; ++d)
                    for (double theta : {0.25, 0.5, 0.75}) {
                        CnnParams params;
                        params.eta_r = eta_r;
                        params.eta_c = eta_c;
                        params.d = RankParameter{d};
                        params.s = FeatureSubset::full(1);
                        params.theta = theta;

                        CnnPrediction fast = cnn_classify(train, params, test);
                        oracle::CnnOutcome naive = oracle::cnn_classify(
                            train.bags, test, eta_r, eta_c, d, {0}, theta);
                        CAPTURE(trial);
                        CAPTURE(eta_r);
                        CAPTURE(eta_c);
                        CAPTURE(d);
                        CAPTURE(theta);
                        REQUIRE(fast.label == naive.label);
                        REQUIRE(fast.score == naive.score);
                        ++checked;
                    }
    }
    CHECK(checked > 500);
}

TEST_CASE("classifier invariants") {
    testsupport::Rng rng(1010);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t t = 4 + rng.next_index(5);
        Dataset train = testsupport::random_dataset(rng, t, 1, 4);
        Bag test = testsupport::random_bag(rng, "x", 1, 4, kPositive);

        CnnParams params;
        params.eta_r = 1 + static_cast<int>(rng.next_index(t - 2));
        params.eta_c = 1 + static_cast<int>(rng.next_index(t - 2));
        params.d = RankParameter{1 + static_cast<int>(rng.next_index(3))};
        params.s = FeatureSubset::full(1);
        params.theta = 0.5;

        CnnPrediction p = cnn_classify(train, params, test);
        CHECK(p.score >= 0.0);
        CHECK(p.score <= 1.0);
        CHECK(p.counts.pos_refs + p.counts.neg_refs == params.eta_r);
        CHECK(p.counts.pos_citers + p.counts.neg_citers <= static_cast<int>(t));

        // raising theta can only flip +1 to -1
        CnnParams stricter = params;
        stricter.theta = 0.8;
        CnnPrediction q = cnn_classify(train, stricter, test);
        if (p.label == kNegative) CHECK(q.label == kNegative);
    }
}

TEST_CASE("duplicating the nearest positive reference cannot shrink the positive reference count") {
    // The citer tally can legitimately move either way (the duplicate's
    // zero-distance column entries reshuffle neighbourhoods), but the
    // reference side is monotone: the copy can only displace a worse-ranked
    // bag from the eta_r nearest.
    testsupport::Rng rng(1111);
    for (int trial = 0; trial < 25; ++trial) {
        Dataset train = testsupport::random_dataset(rng, 5, 1, 3);
        Bag test = testsupport::random_bag(rng, "x", 1, 3, kPositive);

        CnnParams params;
        params.eta_r = 2;
        params.eta_c = 2;
        params.d = RankParameter{1};
        params.s = FeatureSubset::full(1);
        params.theta = 0.5;

        CnnPrediction before = cnn_classify(train, params, test);

        // nearest positive training bag, by the same distance the classifier uses
        DistanceMatrix m = build_distance_matrix(train, test, params.d, params.s);
        std::size_t best = train.size();
        double best_dist = 0.0;
        for (std::size_t j = 0; j < train.size(); ++j) {
            if (train.bags[j].label != kPositive) continue;
            if (best == train.size() || m(m.test_row(), j) < best_dist) {
                best = j;
                best_dist = m(m.test_row(), j);
            }
        }
        if (best == train.size()) continue;  // no positive bag drawn this trial

        Dataset bigger = train;
        Bag copy = train.bags[best];
        copy.id += "_dup";
        bigger.bags.push_back(copy);

        CnnPrediction after = cnn_classify(bigger, params, test);
        CHECK(after.counts.pos_refs >= before.counts.pos_refs);
    }
}
