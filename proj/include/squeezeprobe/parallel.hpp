#pragma once

#include <cstddef>
#include <functional>

namespace squeezeprobe {

// Number of worker threads used by parallel_for: hardware concurrency, capped
// by the SQUEEZE_PROBE_THREADS environment variable when set (minimum 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks, one
// per worker; each index writes only its own output slot, so results are
// independent of the thread count. `threads` overrides the default worker
// count (0 = use worker_count()).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

}  // namespace squeezeprobe
