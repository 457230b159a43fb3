#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// the library's factorizations.

#include <cmath>
#include <cstdint>
#include <vector>

#include "stochlp/dense_linalg.hpp"
#include "stochlp/stochastic_step.hpp"

namespace testing {

using stochlp::Matrix;
using stochlp::Rng;
using stochlp::Vector;

inline Matrix random_matrix(std::size_t m, std::size_t n, Rng& rng) {
  Matrix a(m, n);
  for (double& v : a.data()) v = 2.0 * rng.uniform() - 1.0;
  return a;
}

inline Vector random_positive(std::size_t n, Rng& rng, double lo = 0.5, double hi = 2.0) {
  Vector w(n);
  for (double& v : w) v = lo + (hi - lo) * rng.uniform();
  return w;
}

inline Matrix triple_loop(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += (long double)a(i, k) * b(k, j);
      c(i, j) = static_cast<double>(acc);
    }
  return c;
}

// Gauss-Jordan inverse with full pivoting in long double.
inline Matrix gauss_jordan_inverse(const Matrix& g) {
  const std::size_t n = g.rows();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = g(i, j);
    m[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    std::swap(m[piv], m[col]);
    const long double p = m[col][col];
    for (auto& v : m[col]) v /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = m[r][col];
      for (std::size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = static_cast<double>(m[i][n + j]);
  return inv;
}

inline Matrix weighted_gram(const Matrix& a, const Vector& w) {
  Matrix g(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) {
      long double acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += (long double)a(i, k) * w[k] * a(j, k);
      g(i, j) = static_cast<double>(acc);
    }
  return g;
}

// Aᵀ (A W Aᵀ)⁻¹ A from an explicit inverse.
inline Matrix naive_sandwich(const Matrix& a, const Vector& w) {
  const Matrix inv = gauss_jordan_inverse(weighted_gram(a, w));
  return triple_loop(triple_loop(a.transpose(), inv), a);
}

// √W Aᵀ (A W Aᵀ)⁻¹ A √W.
inline Matrix naive_projection(const Matrix& a, const Vector& w) {
  Matrix m = naive_sandwich(a, w);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= std::sqrt(w[i] * w[j]);
  return m;
}

inline Vector apply(const Matrix& m, const Vector& x) {
  Vector y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    long double acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += (long double)m(i, j) * x[j];
    y[i] = static_cast<double>(acc);
  }
  return y;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace testing
