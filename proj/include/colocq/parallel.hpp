#pragma once

#include <cstddef>
#include <exception>
#include <limits>

namespace colocq {

// Worker count for parallel loops; 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for i in [0, n). Iterations must be independent. If any
// iteration throws, the exception of the lowest failing index is rethrown
// after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(colocq_parallel_for_error)
      {
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace colocq
