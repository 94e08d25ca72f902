#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nav2d::util {

/// Runs fn(0..n-1), optionally across OpenMP threads. Iterations must be
/// independent; results are identical regardless of thread count.
template <typename F>
void parallel_for(int n, F&& fn, bool parallel = true) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace nav2d::util
