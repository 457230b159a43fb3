#include "stochlp/dense_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochlp/detail/kernels.hpp"

namespace stochlp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::domain_error: return "domain_error";
    case Errc::not_positive_definite: return "not_positive_definite";
    case Errc::rank_deficient: return "rank_deficient";
    case Errc::singular_system: return "singular_system";
    case Errc::potential_overflow: return "potential_overflow";
    case Errc::step_unbounded: return "step_unbounded";
    case Errc::positivity_lost: return "positivity_lost";
    case Errc::centering_failed: return "centering_failed";
    case Errc::oracle_refused: return "oracle_refused";
    case Errc::parse_error: return "parse_error";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::dimension_mismatch, what);
}

CholeskyFactor factor_with_jitter(const Matrix& g) {
  try {
    return CholeskyFactor::factor(g);
  } catch (const Error& e) {
    if (e.code() != Errc::not_positive_definite) throw;
    const double jitter = 1e-12 * g.trace() / static_cast<double>(g.rows());
    return CholeskyFactor::factor(g, jitter);
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw Error(Errc::dimension_mismatch, "matrix entry count does not match shape");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!std::isfinite(data_[i]))
      throw Error(Errc::domain_error, "non-finite matrix entry", static_cast<std::ptrdiff_t>(i));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> tmp;
  for (const auto& r : rows) tmp.emplace_back(r);
  return from_rows(tmp);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.front().size();
  std::vector<double> entries;
  entries.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n)
      throw Error(Errc::dimension_mismatch, "ragged row " + std::to_string(i),
                  static_cast<std::ptrdiff_t>(i));
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  return Matrix(m, n, std::move(entries));
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const noexcept { return norm2(data_); }

double Matrix::trace() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
  return acc;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference shape mismatch");
  Matrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

double norm1(std::span<const double> a) noexcept {
  double acc = 0.0;
  for (double v : a) acc += std::abs(v);
  return acc;
}

double norm_inf(std::span<const double> a) noexcept {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, Kernels k) {
  require(a.cols() == b.rows(), "mat_mul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  if (k == Kernels::parallel)
    kernels::omp::mat_mul(a, b, c);
  else
    kernels::serial::mat_mul(a, b, c);
  return c;
}

Vector mat_vec(const Matrix& a, std::span<const double> x, Kernels k) {
  require(a.cols() == x.size(), "mat_vec: length mismatch");
  Vector y(a.rows());
  if (k == Kernels::parallel)
    kernels::omp::mat_vec(a, x, y);
  else
    kernels::serial::mat_vec(a, x, y);
  return y;
}

Vector mat_tvec(const Matrix& a, std::span<const double> x) {
  require(a.rows() == x.size(), "mat_tvec: length mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += ai[j] * xi;
  }
  return y;
}

Matrix form_gram(const Matrix& a, std::span<const double> w, Kernels k) {
  require(a.cols() == w.size(), "form_gram: weight length differs from column count");
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0))
      throw Error(Errc::domain_error, "form_gram: weight " + std::to_string(i) + " is not positive",
                  static_cast<std::ptrdiff_t>(i));
  Matrix g(a.rows(), a.rows());
  if (k == Kernels::parallel)
    kernels::omp::gram(a, w, g);
  else
    kernels::serial::gram(a, w, g);
  return g;
}

CholeskyFactor CholeskyFactor::factor(const Matrix& g, double diagonal_shift) {
  require(g.rows() == g.cols(), "cholesky: matrix is not square");
  const std::size_t n = g.rows();
  CholeskyFactor f;
  f.l_ = Matrix(n, n);
  Matrix& l = f.l_;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = g(j, j) + diagonal_shift;
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw Error(Errc::not_positive_definite,
                  "cholesky: non-positive pivot " + std::to_string(j) + " (" +
                      std::to_string(diag) + ")",
                  static_cast<std::ptrdiff_t>(j));
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = g(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / ljj;
    }
  }
  return f;
}

void CholeskyFactor::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = l_.rows();
  require(rhs.size() == n, "cholesky solve: length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= l_(i, k) * rhs[k];
    rhs[i] = acc / l_(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = rhs[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= l_(k, ii) * rhs[k];
    rhs[ii] = acc / l_(ii, ii);
  }
}

Matrix CholeskyFactor::forward_substitute(const Matrix& b) const {
  const std::size_t n = l_.rows();
  require(b.rows() == n, "cholesky forward: row mismatch");
  Matrix y = b;
  for (std::size_t i = 0; i < n; ++i) {
    auto yi = y.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l_(i, k);
      const auto yk = y.row(k);
      for (std::size_t j = 0; j < yi.size(); ++j) yi[j] -= lik * yk[j];
    }
    const double inv = 1.0 / l_(i, i);
    for (double& v : yi) v *= inv;
  }
  return y;
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
  const std::size_t n = l_.rows();
  Matrix x = forward_substitute(b);
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double lki = l_(k, ii);
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= lki * xk[j];
    }
    const double inv = 1.0 / l_(ii, ii);
    for (double& v : xi) v *= inv;
  }
  return x;
}

Matrix solve_spd(const Matrix& g, const Matrix& b) {
  require(g.rows() == g.cols(), "solve_spd: matrix is not square");
  require(b.rows() == g.rows(), "solve_spd: right-hand side row mismatch");
  return factor_with_jitter(g).solve(b);
}

std::optional<LuFactor> LuFactor::factor(const Matrix& a, double rel_tol) {
  require(a.rows() == a.cols(), "lu: matrix is not square");
  const std::size_t n = a.rows();
  LuFactor f;
  f.lu_ = a;
  f.perm_.resize(n);
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  double col_norm_product = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j) * a(i, j);
    col_norm_product *= std::sqrt(s);
  }
  Matrix& lu = f.lu_;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    f.perm_[k] = p;
    if (!(std::abs(lu(p, k)) > rel_tol * scale)) return std::nullopt;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
    det *= lu(k, k);
    const double inv = 1.0 / lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu(i, k) * inv;
      lu(i, k) = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
    }
  }
  f.rel_det_ = col_norm_product > 0.0 ? std::abs(det) / col_norm_product : 0.0;
  return f;
}

void LuFactor::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = lu_.rows();
  require(rhs.size() == n, "lu solve: length mismatch");
  for (std::size_t k = 0; k < n; ++k)
    if (perm_[k] != k) std::swap(rhs[k], rhs[perm_[k]]);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= lu_(i, k) * rhs[k];
    rhs[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = rhs[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= lu_(ii, k) * rhs[k];
    rhs[ii] = acc / lu_(ii, ii);
  }
}

namespace {

// Y = L⁻¹ A √W with L the Cholesky factor of A W Aᵀ; then YᵀY is the
// projection (or, with unit scaling, the sandwich Aᵀ(AWAᵀ)⁻¹A).
Matrix scaled_half(const Matrix& a, std::span<const double> w, bool scale_columns, Kernels k) {
  const Matrix g = form_gram(a, w, k);
  const CholeskyFactor chol = factor_with_jitter(g);
  Matrix y = chol.forward_substitute(a);
  if (scale_columns) {
    for (std::size_t i = 0; i < y.rows(); ++i) {
      auto yi = y.row(i);
      for (std::size_t j = 0; j < yi.size(); ++j) yi[j] *= std::sqrt(w[j]);
    }
  }
  return y;
}

Matrix cross(const Matrix& y, Kernels k) {
  Matrix c(y.cols(), y.cols());
  if (k == Kernels::parallel)
    kernels::omp::cross_gram(y, c);
  else
    kernels::serial::cross_gram(y, c);
  return c;
}

}  // namespace

Matrix projection_full(const Matrix& a, std::span<const double> w, Kernels k) {
  return cross(scaled_half(a, w, true, k), k);
}

Matrix inverse_gram_sandwich(const Matrix& a, std::span<const double> w, Kernels k) {
  return cross(scaled_half(a, w, false, k), k);
}

void check_full_row_rank(const Matrix& a) {
  const std::size_t d = a.rows();
  if (d == 0) return;
  Vector ones(a.cols(), 1.0);
  const Matrix g = form_gram(a, ones);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < d; ++i) max_diag = std::max(max_diag, g(i, i));
  CholeskyFactor chol;
  try {
    chol = CholeskyFactor::factor(g);
  } catch (const Error& e) {
    throw Error(Errc::rank_deficient, "constraint matrix is not full row rank (pivot " +
                                          std::to_string(e.index()) + ")",
                e.index());
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double pivot = chol.lower()(i, i);
    if (pivot * pivot <= 1e-12 * max_diag)
      throw Error(Errc::rank_deficient,
                  "constraint matrix is numerically rank deficient at row " + std::to_string(i),
                  static_cast<std::ptrdiff_t>(i));
  }
}

}  // namespace stochlp
