#pragma once

#include <cstddef>
#include <functional>

namespace ripkit {

// Global cap on worker threads. 0 means hardware concurrency.
// Mirrors the CLI --threads flag and the RIPKIT_THREADS env var.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(block_index, begin, end) over [0, n) split into fixed-size
// blocks. The block layout depends only on n and grain, never on the
// thread count, so per-block results can be reduced in block order and
// the outcome is independent of scheduling.
void parallel_for_blocks(
    std::size_t n, std::size_t grain,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t num_blocks(std::size_t n, std::size_t grain);

}  // namespace ripkit
