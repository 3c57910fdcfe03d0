#pragma once

#include <atomic>
#include <functional>

namespace wz {

// Caps the worker pool used by parallel_for. 0 restores the hardware default.
void set_worker_threads(int n);
int worker_threads();

// Runs fn(i) for i in [0, count). Work items must be independent; each index
// is executed exactly once, so per-index output writes stay deterministic
// regardless of the thread count. Falls back to a plain loop for small counts.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace wz
