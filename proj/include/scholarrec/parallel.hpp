#pragma once

#include <cstddef>
#include <functional>

namespace scholarrec {

/// Worker count: `requested` when nonzero, else SCHOLARREC_THREADS when set,
/// else the hardware concurrency. Always at least 1.
std::size_t worker_count(std::size_t requested = 0);

/// Splits [0, n) into contiguous blocks and runs body(begin, end, worker) on
/// up to `workers` threads. Each index is visited exactly once; callers write
/// results to per-index slots so output never depends on the schedule.
void parallel_blocks(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace scholarrec
