#pragma once

#include <cstdint>
#include <functional>

namespace ggmc {

// Thread budget: GGMC_THREADS if set and > 0, otherwise the hardware
// concurrency. Deterministic outputs never depend on the budget.
int thread_budget();

// Runs fn(i) for i in [0, n) on up to `threads` threads (<= 0 means the
// budget). Work is split into contiguous index blocks; the callee must write
// results only at locations addressed by i. The first thrown exception is
// rethrown on the calling thread.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                  int threads = 0);

}  // namespace ggmc
