#pragma once

#include <cstddef>
#include <functional>

namespace nashcsg {

// Runs body(i) for i in [0, count) on up to `threads` workers, each taking a
// contiguous block. Results must be written to per-index slots so the outcome
// does not depend on the worker count. If bodies throw, the exception of the
// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// Worker count to use when the caller asks for 0 ("auto").
int default_thread_count();

}  // namespace nashcsg
