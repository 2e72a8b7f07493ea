#pragma once

// Fixture generators shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "numkernel.hpp"
#include "schedule.hpp"

namespace blocktrid::testing {

/// Standard normal complex entries, fixed seed.
inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = {n(rng), n(rng)};
  return m;
}

inline Matrix random_matrix(std::size_t d, std::uint64_t seed) { return random_matrix(d, d, seed); }

inline Matrix random_hermitian(std::size_t d, std::uint64_t seed) {
  const Matrix a = random_matrix(d, seed);
  Matrix h(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

inline Vector random_vector(std::size_t d, std::uint64_t seed) {
  const Matrix a = random_matrix(d, 1, seed);
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = a(i, 0);
  return v;
}

/// Haar-like unitary: classical Gram-Schmidt on random columns, done here
/// rather than through the library's orthogonalizer.
inline Matrix random_unitary(std::size_t d, std::uint64_t seed) {
  Matrix a = random_matrix(d, seed);
  Matrix q(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Complex> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = a(i, j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot{};
        for (std::size_t i = 0; i < d; ++i) dot += std::conj(q(i, k)) * v[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= dot * q(i, k);
      }
    double nrm = 0.0;
    for (const auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < d; ++i) q(i, j) = v[i] / nrm;
  }
  return q;
}

/// Schedule with n_{k+1} drawn from [2 s_k, 2 s_k + slack].
inline std::vector<std::size_t> random_general_sizes(std::uint64_t seed, std::size_t reach) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> sizes{1 + rng() % 4};
  std::size_t sum = sizes.front();
  while (sum < reach) {
    const std::size_t next = 2 * sum + rng() % (sum + 1);
    sizes.push_back(next);
    sum += next;
  }
  return sizes;
}

inline double max_entry_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace blocktrid::testing
