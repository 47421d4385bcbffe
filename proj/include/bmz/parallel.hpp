#pragma once

#include <cstdint>
#include <functional>

// Contiguous-range work splitting. Workers receive disjoint index ranges, so
// callers that combine per-worker results in worker order stay deterministic
// regardless of the thread count.

namespace bmz {

// requested <= 0 resolves to $BMZ_THREADS, falling back to the hardware count.
int resolve_threads(int requested);

// Runs fn(worker, lo, hi) on `threads` workers over [0, n) split contiguously.
// Worker 0 runs on the calling thread. Exceptions propagate (first one wins).
void parallel_ranges(std::uint64_t n, int threads,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

}  // namespace bmz
