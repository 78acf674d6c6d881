#pragma once

#include <cstddef>
#include <functional>

namespace arc {

/// Worker count used by parallel_for. Resolution order: explicit
/// set_thread_count, then the ARC_THREADS environment variable, then
/// hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks,
/// one per worker; every fn(i) writes only to slot i of its output, so
/// results are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace arc
