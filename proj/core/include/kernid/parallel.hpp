#pragma once

#include <functional>

namespace kernid {

/// Worker count for internal parallelism. Reads KERNID_THREADS once per call;
/// 0 or unset means hardware concurrency. Always at least 1.
int effective_threads();

/// Runs fn(i) for i in [0, count) across effective_threads() workers.
/// Blocks until done; the first exception thrown by any task is rethrown.
void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace kernid
