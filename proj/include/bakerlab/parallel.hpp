#pragma once

#include <cstddef>
#include <functional>

namespace bakerlab {

/// Worker count: BAKERLAB_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; callers write results by index to keep output ordered.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bakerlab
