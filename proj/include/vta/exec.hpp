#pragma once

#include <cstddef>
#include <cstdint>

namespace vta {

/// Selects between the OpenMP row-parallel path and its serial reference.
/// Both paths compute each row independently and reduce in row order, so
/// results are bitwise identical.
enum class Exec { serial, parallel };

/// Calls fn(i) for every i in [0, n). Under Exec::parallel the iterations are
/// distributed across OpenMP threads; fn must only write to row-private state.
template <class Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::parallel && n > 1) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Number of worker threads the parallel path will use.
int parallel_threads() noexcept;

}  // namespace vta
