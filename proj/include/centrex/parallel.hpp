#pragma once

// Indexed map kernels with a serial reference path and an OpenMP path.
//
// Every data-parallel loop in the library writes result i into slot i and
// reduces afterwards in index order, so both paths produce bitwise identical
// output regardless of the thread count.

#include <cstddef>
#include <vector>

namespace centrex {

enum class Exec { serial, parallel };

// Number of OpenMP threads the parallel path will use (1 without OpenMP).
int max_threads();
// Sets the OpenMP thread count; n <= 0 leaves the runtime default.
void set_threads(int n);

template <class T, class Fn>
std::vector<T> map_indexed(Exec exec, std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace centrex
