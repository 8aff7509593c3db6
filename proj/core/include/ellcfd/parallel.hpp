#pragma once

// Loop-level parallelism for the vector kernels. Every parallel loop writes
// disjoint outputs; reductions go through blocked_sum so results do not depend
// on the worker count.

#include <cstddef>
#include <span>

#if defined(ELLCFD_HAVE_OPENMP)
#define ELLCFD_PARALLEL_FOR _Pragma("omp parallel for schedule(static)")
#else
#define ELLCFD_PARALLEL_FOR
#endif

namespace ellcfd {

/// Sets the number of workers used by parallel kernels (no-op without OpenMP).
void set_worker_count(int n);
int worker_count();

/// Block length of the fixed-order reductions.
inline constexpr std::size_t kReductionBlock = 4096;

}  // namespace ellcfd
