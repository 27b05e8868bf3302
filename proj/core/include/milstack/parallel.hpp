#ifndef MILSTACK_PARALLEL_HPP
#define MILSTACK_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace milstack {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items are claimed
// through an atomic counter, so assignment order is nondeterministic, but each
// index runs exactly once; callers must make fn(i) write only to slot i so the
// overall result is identical to a sequential run.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (n == 0) return;
    if (jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = jobs;
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<unsigned>(n);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) threads.emplace_back(body);
    body();
    for (std::thread& t : threads) t.join();

    if (error) std::rethrow_exception(error);
}

}  // namespace milstack

#endif
