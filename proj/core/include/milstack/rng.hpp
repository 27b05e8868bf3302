#ifndef MILSTACK_RNG_HPP
#define MILSTACK_RNG_HPP

#include <cstdint>
#include <random>

namespace milstack {

// mt19937_64 with hand-rolled draw helpers. The engine's output sequence is
// pinned by the standard; std::uniform_*_distribution is not, so artifacts
// stay reproducible across standard libraries only if we map bits ourselves.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_real() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi]
    double next_real(double lo, double hi) {
        return lo + (hi - lo) * next_real();
    }

    // uniform integer in [lo, hi], both inclusive
    int next_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    // uniform index in [0, n)
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

    bool next_bool(double p) { return next_real() < p; }

    // derive an independent child stream (e.g. per fold or per stage)
    Rng fork() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates using the stable draw helpers above.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = rng.next_index(i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace milstack

#endif
