#include <omp.h>

#include "stochlp/detail/kernels.hpp"

namespace stochlp::kernels::omp {

namespace {
// Below this many multiply-adds the thread fork costs more than it saves.
constexpr std::size_t kMinParallelWork = 1u << 15;
}  // namespace

void mat_mul(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t k = a.cols(), p = b.cols();
  const bool big = a.rows() * k * p >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    auto ci = c.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < p; ++j) ci[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a(static_cast<std::size_t>(i), l);
      const auto bl = b.row(l);
#pragma omp simd
      for (std::size_t j = 0; j < p; ++j) ci[j] += ail * bl[j];
    }
  }
}

void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t n = a.cols();
  const bool big = a.rows() * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto ai = a.row(static_cast<std::size_t>(i));
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t j = 0; j < n; ++j) acc += ai[j] * x[j];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

void gram(const Matrix& a, std::span<const double> w, Matrix& g) {
  const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t n = a.cols();
  const bool big = a.rows() * a.rows() * n / 2 >= kMinParallelWork;
#pragma omp parallel for schedule(dynamic, 1) if (big)
  for (std::ptrdiff_t ii = 0; ii < d; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto ai = a.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto aj = a.row(j);
      double acc = 0.0;
#pragma omp simd reduction(+ : acc)
      for (std::size_t l = 0; l < n; ++l) acc += ai[l] * w[l] * aj[l];
      g(i, j) = acc;
      g(j, i) = acc;
    }
  }
}

void cross_gram(const Matrix& y, Matrix& c) {
  const std::size_t d = y.rows();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.cols());
  const bool big = y.cols() * y.cols() * d / 2 >= kMinParallelWork;
#pragma omp parallel for schedule(dynamic, 4) if (big)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < d; ++l) acc += y(l, i) * y(l, j);
      c(i, j) = acc;
      c(j, i) = acc;
    }
  }
}

}  // namespace stochlp::kernels::omp
