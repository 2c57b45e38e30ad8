#pragma once

#include <cstdint>
#include <functional>

namespace relaylab {

/// Worker count used by parallel_for: hardware concurrency, capped by the
/// RELAYLAB_THREADS environment variable when set (minimum 1).
int max_threads();

/// Runs f(i) for i in [begin, end) across worker threads. Work is split into
/// fixed contiguous chunks so callers that write to index i of a preallocated
/// buffer get results independent of scheduling. Exceptions from workers are
/// rethrown on the calling thread.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& f);

}  // namespace relaylab
