#pragma once

#include <cstddef>
#include <span>

#include "stochlp/dense_linalg.hpp"

namespace stochlp {

/// Natural log of n, with n clamped to at least 3 so the result is ≥ 1.
double clamped_log(std::size_t n) noexcept;

/// Φ_λ(r) = Σ cosh(λ r_i), the centrality potential of the outer loop.
///
/// Arguments with |λ r_i| > 700 raise Errc::potential_overflow instead of
/// producing infinities.
class CoshPotential {
 public:
  explicit CoshPotential(double lambda);

  double lambda() const noexcept { return lambda_; }

  double value(std::span<const double> r) const;
  void gradient(std::span<const double> r, std::span<double> out) const;
  Vector gradient(std::span<const double> r) const;

  /// Value and gradient from one exponential per coordinate.
  double value_and_gradient(std::span<const double> r, std::span<double> grad) const;

  /// Σ λ² cosh(λ r_i) v_i², the squared local norm ‖v‖²_{∇²Φ(r)}.
  double hessian_norm_sq(std::span<const double> r, std::span<const double> v) const;

  static constexpr double kOverflowArgument = 700.0;

 private:
  double lambda_;
};

/// Soft-threshold potential ψ with tolerance ε_mp ∈ (0, 1/4): quadratic up to
/// ε_mp, a mirrored quadratic up to 2ε_mp and flat at ε_mp beyond.
class SoftErrorPotential {
 public:
  explicit SoftErrorPotential(double eps_mp);

  double eps_mp() const noexcept { return eps_; }
  double value(double x) const noexcept;
  double derivative(double x) const noexcept;
  double second_derivative(double x) const noexcept;

 private:
  double eps_;
};

/// Per-rank weights g_1 ≥ g_2 ≥ … ≥ g_n tying the maintenance potential to
/// the cost of a batched rank-r update.
class WeightSchedule {
 public:
  WeightSchedule(std::size_t n, double a, double omega);

  std::size_t n() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double omega() const noexcept { return omega_; }

  /// g_i for 1-based rank i.
  double weight(std::size_t i) const;

 private:
  std::size_t n_;
  double a_;
  double omega_;
  double threshold_;   // n^a
  double flat_;        // n^{-a}
  double exponent_;    // (ω−2)/(1−a) − 1
  double scale_;       // n^{−a(ω−2)/(1−a)}
};

/// Σ g_i ψ(e_(i)) with the errors sorted by decreasing magnitude.
double maintenance_potential(const WeightSchedule& g, const SoftErrorPotential& psi,
                             std::span<const double> errors);

}  // namespace stochlp
