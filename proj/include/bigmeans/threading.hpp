#pragma once

#include <cstddef>

namespace bigmeans {

// Worker-thread count used by the parallel kernels (assignment, centroid
// accumulation, D^2 refresh). Results are bit-identical for any count: work is
// tiled into fixed-size blocks and per-block partials are merged in block
// order, so scheduling never changes the arithmetic.
void set_worker_count(unsigned count);
unsigned worker_count();

// Point-range tile width for the fixed-order reductions. Exposed for tests.
inline constexpr std::size_t kReductionBlock = 1024;

}  // namespace bigmeans
