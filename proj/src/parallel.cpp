#include "bmz/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bmz {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BMZ_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_ranges(std::uint64_t n, int threads,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    if (threads < 1) threads = 1;
    if (n == 0) return;
    const auto workers = static_cast<std::uint64_t>(threads) < n
                             ? static_cast<std::uint64_t>(threads)
                             : n;
    if (workers == 1) {
        fn(0, 0, n);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&](int w) {
        const std::uint64_t lo = n * w / workers;
        const std::uint64_t hi = n * (w + 1) / workers;
        try {
            fn(w, lo, hi);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::uint64_t w = 1; w < workers; ++w)
        pool.emplace_back(run, static_cast<int>(w));
    run(0);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bmz
