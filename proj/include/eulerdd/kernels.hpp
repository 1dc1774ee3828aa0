#pragma once

// Data-parallel kernels. Each kernel has a serial reference that the tests
// compare against; the OpenMP variants split the index range into a fixed
// number of chunks so that the floating-point summation order (and hence
// every output bit) does not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "eulerdd/linalg.hpp"

namespace eulerdd::kernels {

inline constexpr std::size_t kChunks = 32;

enum class Exec { Serial, Parallel };

template <class Term>
Matrix serial_sum(std::size_t n, Eigen::Index rows, Term&& term) {
  Matrix acc = Matrix::Zero(rows, rows);
  for (std::size_t k = 0; k < n; ++k) acc += term(k);
  return acc;
}

template <class Term>
Matrix chunked_sum(std::size_t n, Eigen::Index rows, Term&& term) {
  const std::size_t chunks = std::min(n, kChunks);
  if (chunks <= 1) return serial_sum(n, rows, term);
  std::vector<Matrix> partial(chunks, Matrix::Zero(rows, rows));
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const auto uc = static_cast<std::size_t>(c);
    const std::size_t begin = uc * n / chunks;
    const std::size_t end = (uc + 1) * n / chunks;
    try {
      for (std::size_t k = begin; k < end; ++k) partial[uc] += term(k);
    } catch (...) {
#pragma omp critical(eulerdd_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  Matrix acc = Matrix::Zero(rows, rows);
  for (const auto& p : partial) acc += p;
  return acc;
}

template <class Term>
Matrix sum(Exec exec, std::size_t n, Eigen::Index rows, Term&& term) {
  return exec == Exec::Serial ? serial_sum(n, rows, term) : chunked_sum(n, rows, term);
}

// Evaluates fn(0..n-1) with results kept in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    try {
      out[static_cast<std::size_t>(k)] = fn(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(eulerdd_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// (1/|G|) sum_j g_j^dagger x g_j
inline Matrix group_average_serial(std::span<const Matrix> reps, const Matrix& x) {
  const Matrix sum = serial_sum(reps.size(), x.rows(),
                                [&](std::size_t j) -> Matrix { return reps[j].adjoint() * x * reps[j]; });
  return sum / static_cast<double>(reps.size());
}

inline Matrix group_average(std::span<const Matrix> reps, const Matrix& x) {
  const Matrix sum = chunked_sum(reps.size(), x.rows(),
                                 [&](std::size_t j) -> Matrix { return reps[j].adjoint() * x * reps[j]; });
  return sum / static_cast<double>(reps.size());
}

}  // namespace eulerdd::kernels
