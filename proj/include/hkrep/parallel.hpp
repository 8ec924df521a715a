#pragma once

#include <cstddef>
#include <functional>

namespace hkrep {

/// Worker cap used by sampling and counting loops (1 = run inline).
void set_thread_count(int threads);
int thread_count();

/// Calls fn(i) for i in [0, count). Results must be written to per-index
/// slots so that the outcome does not depend on scheduling. The first
/// exception thrown by any call is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hkrep
