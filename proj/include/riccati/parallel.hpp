#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace riccati {

/// Serial runs are the reference path; Parallel distributes independent
/// iterations over OpenMP threads. Both produce identical results.
enum class Execution { Serial, Parallel };

/// Runs body(i) for i in [0, n). Exceptions are collected per iteration and
/// the one from the lowest index is rethrown after the loop.
template <typename Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace riccati
