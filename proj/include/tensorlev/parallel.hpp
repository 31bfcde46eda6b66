#pragma once

#include <cstddef>
#include <functional>

namespace tensorlev {

/// Process-wide worker count used by library loops (default 1).
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across
/// thread_count() workers. Results must not depend on the split.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tensorlev
