#pragma once

#include <cstddef>
#include <functional>

namespace lgr {

/// Worker count honoring LG_RADIAL_THREADS (unset or 0 = hardware concurrency).
unsigned thread_count();

/// Runs body(i) for i in [0, count) over contiguous chunks. Each index is
/// visited exactly once, so writes to disjoint slots stay deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lgr
