#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "stochlp/error.hpp"

namespace stochlp {

using Vector = std::vector<double>;

/// Selects the kernel family used by the dense products. `sequential` runs the
/// serial reference loops; `parallel` runs the OpenMP versions, which may
/// differ from the reference in the last bits.
enum class Kernels { sequential, parallel };

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of `entries`; throws if the size is wrong or any entry is
  /// not finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  double frobenius_norm() const noexcept;
  double trace() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator-(const Matrix& a, const Matrix& b);

// Vector helpers.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> a) noexcept;
double norm1(std::span<const double> a) noexcept;
double norm_inf(std::span<const double> a) noexcept;

/// C = A B.
Matrix mat_mul(const Matrix& a, const Matrix& b, Kernels kernels = Kernels::sequential);
/// y = A x.
Vector mat_vec(const Matrix& a, std::span<const double> x, Kernels kernels = Kernels::sequential);
/// y = Aᵀ x.
Vector mat_tvec(const Matrix& a, std::span<const double> x);
/// A diag(w) Aᵀ. Every w_i must be positive.
Matrix form_gram(const Matrix& a, std::span<const double> w,
                 Kernels kernels = Kernels::sequential);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class CholeskyFactor {
 public:
  /// Throws Errc::not_positive_definite with the failing pivot as index.
  static CholeskyFactor factor(const Matrix& g, double diagonal_shift = 0.0);

  std::size_t size() const noexcept { return l_.rows(); }
  const Matrix& lower() const noexcept { return l_; }

  void solve_in_place(std::span<double> rhs) const;
  /// L⁻¹ B, applied column-wise to a d×m matrix.
  Matrix forward_substitute(const Matrix& b) const;
  Matrix solve(const Matrix& b) const;

 private:
  Matrix l_;
};

/// Solves G X = B for symmetric positive definite G. On a pivot failure the
/// factorization is retried once with diagonal jitter 1e-12·trace(G)/d.
Matrix solve_spd(const Matrix& g, const Matrix& b);

/// LU factorization with partial pivoting, used for the small indefinite
/// systems of the Woodbury corrections and the basis solves of the oracle.
class LuFactor {
 public:
  /// Returns nullopt when some pivot is below `rel_tol` times the largest
  /// entry magnitude of `a`.
  static std::optional<LuFactor> factor(const Matrix& a, double rel_tol = 1e-14);

  std::size_t size() const noexcept { return lu_.rows(); }
  void solve_in_place(std::span<double> rhs) const;
  /// |det| divided by the product of the column Euclidean norms of the input.
  double relative_determinant() const noexcept { return rel_det_; }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double rel_det_ = 0.0;
};

/// √W Aᵀ (A W Aᵀ)⁻¹ A √W as a dense n×n matrix.
Matrix projection_full(const Matrix& a, std::span<const double> w,
                       Kernels kernels = Kernels::sequential);

/// Aᵀ (A W Aᵀ)⁻¹ A, the unscaled form held by the projection maintainer.
Matrix inverse_gram_sandwich(const Matrix& a, std::span<const double> w,
                             Kernels kernels = Kernels::sequential);

/// Throws Errc::rank_deficient when A Aᵀ is numerically singular (some
/// Cholesky pivot² ≤ 1e-12 · max diagonal).
void check_full_row_rank(const Matrix& a);

}  // namespace stochlp
