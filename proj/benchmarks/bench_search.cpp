#include <benchmark/benchmark.h>

#include "milstack/dataset.hpp"
#include "milstack/nsga2.hpp"
#include "milstack/rng.hpp"
#include "milstack/svm.hpp"
#include "milstack/validation.hpp"

using namespace milstack;

namespace {

Dataset musk1() {
    static Dataset data = normalize_minmax(load_musk_csv(MILSTACK_MUSK1_PATH));
    return data;
}

CnnGenome random_genome(Rng& rng, std::size_t m) {
    CnnGenome g;
    g.eta_r = rng.next_int(1, 15);
    g.eta_c = rng.next_int(1, 15);
    g.d = rng.next_int(1, 5);
    g.theta = rng.next_real(0.05, 0.95);
    g.feature_mask.assign(m, 0);
    for (auto& bit : g.feature_mask) bit = rng.next_bool(0.5) ? 1 : 0;
    g.feature_mask[0] = 1;
    return g;
}

}  // namespace

// one GA fitness evaluation: full LOO over Musk1 for a random genome
static void BM_LooEvaluationMusk1(benchmark::State& state) {
    Dataset data = musk1();
    Rng rng(7);
    for (auto _ : state) {
        CnnGenome g = random_genome(rng, data.dimensionality);
        ValidationReport report = loo_validate(data, decode_to_params(g, data.size()), 1);
        benchmark::DoNotOptimize(report.acc_pos);
    }
}
BENCHMARK(BM_LooEvaluationMusk1)->Unit(benchmark::kMillisecond);

static void BM_NondominatedSort(benchmark::State& state) {
    Rng rng(11);
    std::vector<Objectives> points(state.range(0));
    for (auto& p : points) {
        p.first = rng.next_index(48) / 47.0;
        p.second = rng.next_index(46) / 45.0;
    }
    for (auto _ : state) benchmark::DoNotOptimize(fast_nondominated_sort(points));
}
BENCHMARK(BM_NondominatedSort)->Arg(100)->Arg(200);

static void BM_SmoTrain(benchmark::State& state) {
    Rng rng(13);
    const std::size_t n = state.range(0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(24));
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : rows[i]) v = rng.next_bool(0.5) ? 1.0 : -1.0;
        labels[i] = i % 2 == 0 ? kPositive : kNegative;
    }
    for (auto _ : state) {
        SvmModel model = train_rbf_svm(rows, labels, 1.0, 10.0);
        benchmark::DoNotOptimize(model.bias);
    }
}
BENCHMARK(BM_SmoTrain)->Arg(46)->Arg(92)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
