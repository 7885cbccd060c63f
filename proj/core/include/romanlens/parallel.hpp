#pragma once

#include <cstddef>
#include <functional>

namespace romanlens {

// Worker count: ROMANLENS_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Callers write results into per-index slots so
// reductions stay in index order regardless of scheduling. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace romanlens
