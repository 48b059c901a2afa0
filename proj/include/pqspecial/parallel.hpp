#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace pqspecial {

/// Worker threads used by sweeps and limit tables: hardware concurrency,
/// capped by the PQSPECIAL_THREADS environment variable when it is set.
[[nodiscard]] unsigned worker_count();

/// Calls body(i) for every i in [0, count). Work is split into contiguous
/// blocks; callers write results by index, so output order never depends on
/// scheduling. The exception thrown for the lowest index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace pqspecial
