#pragma once

#include <cstddef>
#include <functional>

namespace hybridlattice {

// Number of workers used for embarrassingly parallel sweeps: the smaller of
// the job count, std::thread::hardware_concurrency(), and the
// HYBRIDLATTICE_THREADS environment variable when set. Always >= 1.
std::size_t worker_count(std::size_t jobs);

// Run fn(i) for i in [0, n). Work is split by static index stride, so each
// index is written by exactly one worker and results are deterministic
// regardless of the thread count. Exceptions thrown by fn are rethrown on
// the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hybridlattice
