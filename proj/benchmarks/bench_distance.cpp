#include <benchmark/benchmark.h>

#include "milstack/dataset.hpp"
#include "milstack/hausdorff.hpp"
#include "milstack/rng.hpp"

using namespace milstack;

namespace {

Dataset musk1() {
    static Dataset data = normalize_minmax(load_musk_csv(MILSTACK_MUSK1_PATH));
    return data;
}

FeatureSubset random_subset(std::size_t m, std::size_t count, Rng& rng) {
    std::vector<std::size_t> indices;
    while (indices.size() < count) {
        std::size_t f = rng.next_index(m);
        bool seen = false;
        for (std::size_t i : indices) seen = seen || i == f;
        if (!seen) indices.push_back(f);
    }
    return FeatureSubset(std::move(indices), m);
}

}  // namespace

static void BM_RankHausdorffPair(benchmark::State& state) {
    Dataset data = musk1();
    const Bag& a = data.bags[0];   // 4 conformations
    const Bag& b = data.bags[12];  // larger bag
    FeatureSubset s = FeatureSubset::full(data.dimensionality);
    RankParameter d{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(rank_hausdorff(a, b, d, s));
}
BENCHMARK(BM_RankHausdorffPair)->Arg(1)->Arg(3);

static void BM_PairwiseCacheMusk1(benchmark::State& state) {
    Dataset data = musk1();
    Rng rng(1);
    FeatureSubset s = random_subset(data.dimensionality, data.dimensionality / 2, rng);
    for (auto _ : state) {
        PairwiseCache cache(data, RankParameter{1}, s, static_cast<unsigned>(state.range(0)));
        benchmark::DoNotOptimize(cache(0, 1));
    }
}
BENCHMARK(BM_PairwiseCacheMusk1)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
