#pragma once

#include <cstdint>
#include <exception>
#include <mutex>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace splitlv {

inline int default_workers() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for i in [0, n). workers == 1 takes a plain serial loop and
// is the reference the parallel path is tested against. Bodies must write
// only to their own result slots; callers reduce afterwards in fixed index
// order, which is what makes results identical for every worker count.
// The first exception thrown by any iteration is rethrown after the loop.
template <typename Body>
void parallel_for_index(std::int64_t n, int workers, Body&& body) {
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#if defined(_OPENMP)
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace splitlv
