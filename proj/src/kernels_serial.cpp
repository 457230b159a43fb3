#include "stochlp/detail/kernels.hpp"

namespace stochlp::kernels::serial {

void mat_mul(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), p = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    auto ci = c.row(i);
    for (std::size_t j = 0; j < p; ++j) ci[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a(i, l);
      const auto bl = b.row(l);
      for (std::size_t j = 0; j < p; ++j) ci[j] += ail * bl[j];
    }
  }
}

void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
}

void gram(const Matrix& a, std::span<const double> w, Matrix& g) {
  const std::size_t d = a.rows(), n = a.cols();
  for (std::size_t i = 0; i < d; ++i) {
    const auto ai = a.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto aj = a.row(j);
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += ai[l] * w[l] * aj[l];
      g(i, j) = acc;
      g(j, i) = acc;
    }
  }
}

void cross_gram(const Matrix& y, Matrix& c) {
  const std::size_t d = y.rows(), n = y.cols();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < d; ++l) acc += y(l, i) * y(l, j);
      c(i, j) = acc;
      c(j, i) = acc;
    }
  }
}

}  // namespace stochlp::kernels::serial
