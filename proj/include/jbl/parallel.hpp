#pragma once

#include <cstddef>
#include <functional>

namespace jbl {

// Global worker count. 0 or 1 means serial. Initialized from the
// BALLISTIC_LAB_THREADS environment variable on first use.
int thread_count();
void set_thread_count(int n);

// Index-space map over [0, n). Workers own disjoint index slots, so results
// are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace jbl
