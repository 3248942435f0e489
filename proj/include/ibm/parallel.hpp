#pragma once

#include <cstddef>
#include <functional>

namespace ibm {

// Worker count: IBM_THREADS if set (>= 1), else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Each index is handled by exactly one worker and
// writes only its own output slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ibm
