#pragma once

#include <cstddef>
#include <functional>

namespace fraclab {

// Worker count used by parallel_for. Defaults to 1.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n) on thread_count() workers with static
// contiguous chunks. Callers write results into slot i, so output never
// depends on scheduling. If bodies throw, the exception from the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fraclab
