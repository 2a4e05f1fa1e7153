#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace spt::detail {

// OpenMP loop over [0, n). The first exception thrown by any iteration is
// rethrown on the calling thread once the loop has drained.
template <class F>
void parallel_for(std::size_t n, F&& body, bool parallel = true) {
  std::exception_ptr error;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace spt::detail
