#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace chns {

// Worker count: CHNS_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Runs fn(i) for i in [0, n). Work is assigned by index, so callers that write
// results into slot i get the same output for any thread count. The exception
// thrown at the lowest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace chns
