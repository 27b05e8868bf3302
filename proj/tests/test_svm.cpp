#include <doctest.h>

#include <cmath>

#include "milstack/rng.hpp"
#include "milstack/svm.hpp"

using namespace milstack;

namespace {

// random +-1 rows with random labels, the shape the stacking layer feeds in
std::pair<std::vector<std::vector<double>>, std::vector<Label>> random_meta(Rng& rng,
                                                                            std::size_t n,
                                                                            std::size_t j) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(j));
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : rows[i]) v = rng.next_bool(0.5) ? 1.0 : -1.0;
        labels[i] = i == 0 ? kPositive : (i == 1 ? kNegative : (rng.next_bool(0.5) ? kPositive : kNegative));
    }
    return {rows, labels};
}

}  // namespace

TEST_CASE("perfectly informative single column is learnt exactly") {
    std::vector<std::vector<double>> rows{{1}, {1}, {-1}, {-1}, {1}, {-1}};
    std::vector<Label> labels{kPositive, kPositive, kNegative, kNegative, kPositive, kNegative};
    for (double gamma : {0.1, 1.0, 10.0}) {
        for (double c : {1.0, 10.0}) {
            SvmModel model = train_rbf_svm(rows, labels, gamma, c);
            for (std::size_t i = 0; i < rows.size(); ++i) CHECK(model.predict(rows[i]) == labels[i]);
        }
    }
}

TEST_CASE("uninformative constant column falls back to the majority class") {
    SUBCASE("positive majority") {
        std::vector<std::vector<double>> rows(5, std::vector<double>{1.0});
        std::vector<Label> labels{kPositive, kPositive, kPositive, kNegative, kNegative};
        SvmModel model = train_rbf_svm(rows, labels, 1.0, 10.0);
        CHECK(model.predict({1.0}) == kPositive);
    }
    SUBCASE("negative majority") {
        std::vector<std::vector<double>> rows(5, std::vector<double>{1.0});
        std::vector<Label> labels{kNegative, kNegative, kNegative, kPositive, kPositive};
        SvmModel model = train_rbf_svm(rows, labels, 1.0, 10.0);
        CHECK(model.predict({1.0}) == kNegative);
    }
}

TEST_CASE("xor pattern separates with the rbf kernel") {
    // labels = product of the two columns; replicate each pattern a few times
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    for (int rep = 0; rep < 3; ++rep) {
        for (double a : {-1.0, 1.0})
            for (double b : {-1.0, 1.0}) {
                rows.push_back({a, b});
                labels.push_back(a * b > 0 ? kPositive : kNegative);
            }
    }
    SvmModel model = train_rbf_svm(rows, labels, 1.0, 10.0);
    int correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (model.predict(rows[i]) == labels[i]) ++correct;
    CHECK(correct == static_cast<int>(rows.size()));
}

TEST_CASE("single-class input is a contract error") {
    std::vector<std::vector<double>> rows{{1}, {-1}};
    std::vector<Label> labels{kPositive, kPositive};
    CHECK_THROWS_AS(train_rbf_svm(rows, labels, 1.0, 1.0), ContractError);
}

TEST_CASE("dual feasibility holds on random meta problems") {
    Rng rng(1818);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 4 + rng.next_index(40);
        std::size_t j = 1 + rng.next_index(12);
        auto [rows, labels] = random_meta(rng, n, j);
        double gamma = std::pow(10.0, rng.next_real(-2, 2));
        double c = std::pow(10.0, rng.next_real(-1, 2));

        SvmModel model = train_rbf_svm(rows, labels, gamma, c);
        CAPTURE(trial);
        double weighted_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(model.alphas[i] >= 0.0);
            REQUIRE(model.alphas[i] <= c);
            weighted_sum += model.alphas[i] * labels[i];
        }
        REQUIRE(std::abs(weighted_sum) <= 1e-6);
    }
}

TEST_CASE("training is deterministic") {
    Rng rng(1919);
    auto [rows, labels] = random_meta(rng, 20, 5);
    SvmModel a = train_rbf_svm(rows, labels, 2.0, 5.0);
    SvmModel b = train_rbf_svm(rows, labels, 2.0, 5.0);
    CHECK(a.alphas == b.alphas);
    CHECK(a.bias == b.bias);
}
