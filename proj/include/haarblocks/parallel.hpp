#pragma once

#include <cstddef>
#include <functional>

namespace haarblocks {

/// Runs body(0..n-1) over `threads` workers (0 = hardware concurrency).
/// Work is partitioned statically by index; bodies must write only to
/// index-owned slots, which keeps results identical for any thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Resolved worker count for a request (0 = hardware concurrency).
unsigned resolve_threads(unsigned requested);

}  // namespace haarblocks
