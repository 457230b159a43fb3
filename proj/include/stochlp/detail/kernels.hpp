#pragma once

// Raw dense kernels. Each kernel has a serial reference implementation and an
// OpenMP implementation with the same contract; tests compare the two and
// bench/kernel_bench.cpp times them.

#include <span>

#include "stochlp/dense_linalg.hpp"

namespace stochlp::kernels {

namespace serial {
// c (m×p) = a (m×k) · b (k×p); c is overwritten.
void mat_mul(const Matrix& a, const Matrix& b, Matrix& c);
// y = a · x
void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y);
// g (d×d) = a · diag(w) · aᵀ
void gram(const Matrix& a, std::span<const double> w, Matrix& g);
// c (n×n) = yᵀ · y for y (d×n)
void cross_gram(const Matrix& y, Matrix& c);
}  // namespace serial

namespace omp {
void mat_mul(const Matrix& a, const Matrix& b, Matrix& c);
void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y);
void gram(const Matrix& a, std::span<const double> w, Matrix& g);
void cross_gram(const Matrix& y, Matrix& c);
}  // namespace omp

}  // namespace stochlp::kernels
