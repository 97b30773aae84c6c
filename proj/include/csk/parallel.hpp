#pragma once

#include <cstddef>
#include <functional>

namespace csk {

/// Splits [0, count) into contiguous chunks and runs chunk_fn(lo, hi) on a
/// small thread pool. Callers must only write to disjoint, index-addressed
/// outputs so the partitioning cannot affect results. threads = 0 picks
/// effective_threads().
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace csk
