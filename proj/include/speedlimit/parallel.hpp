#pragma once

#include <cstddef>
#include <functional>

namespace speedlimit {

/// Number of worker threads used by parallel_for. Resolution order:
/// SPEEDLIMIT_THREADS environment variable (positive integer; 0 or unset
/// means "auto"), then std::thread::hardware_concurrency().
int resolve_thread_count();

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each,
/// one chunk per worker. The partition depends only on n and the resolved
/// thread count, and workers never share output elements, so results are
/// reproducible run to run. With one worker the call runs inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace speedlimit
