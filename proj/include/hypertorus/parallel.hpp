#pragma once

#include <cstddef>
#include <functional>

namespace hypertorus {

// Worker count: hardware concurrency, capped by HYPERTORUS_THREADS when set.
int thread_count();

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
// so writing results into slot i keeps the outcome independent of scheduling.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Splits [0, n) into at most thread_count() contiguous ranges and runs
// body(begin, end) on each. Useful when a worker owns scratch buffers.
void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hypertorus
