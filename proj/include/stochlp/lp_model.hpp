#pragma once

#include <optional>
#include <span>
#include <string>

#include "stochlp/dense_linalg.hpp"

namespace stochlp {

/// Standard-form instance  min cᵀx  s.t.  A x = b, x ≥ 0.
///
/// `diameter` bounds ‖x‖₁ over the feasible region and is trusted as given.
/// `lipschitz` bounds ‖c‖_∞.
struct LinearProgram {
  Matrix A;
  Vector b;
  Vector c;
  double diameter = 1.0;
  double lipschitz = 1.0;
  std::string name;

  /// Validates shapes, d ≤ n, full row rank and R > 0. When `lipschitz` is
  /// omitted it is set to max(‖c‖_∞, 1e-30); a supplied value below ‖c‖_∞ is
  /// rejected.
  static LinearProgram make(Matrix A, Vector b, Vector c, double diameter,
                            std::optional<double> lipschitz = std::nullopt,
                            std::string name = {});

  std::size_t num_constraints() const noexcept { return A.rows(); }
  std::size_t num_variables() const noexcept { return A.cols(); }
  double objective(std::span<const double> x) const;
};

/// The feasible-start reformulation together with its strictly feasible
/// primal/dual starting triple.
///
/// Layout of the (d+1)×(n+2) constraint matrix:
///   [ A     0   b/R − A·1 ]   [ b/R ]
///   [ 1ᵀ    1   0         ] = [ n+1 ]
/// with objective (δ/L·c, 0, 1). Variable n is the slack τ and variable n+1 is
/// the artificial θ.
struct ReformulatedLP {
  LinearProgram lp;
  Vector x0;
  Vector y0;
  Vector s0;
  double delta = 0.0;
  std::size_t original_n = 0;
  std::size_t original_d = 0;

  std::size_t tau_index() const noexcept { return original_n; }
  std::size_t theta_index() const noexcept { return original_n + 1; }
};

/// Requires 0 < delta ≤ 1 and a resulting strictly positive dual start.
ReformulatedLP reformulate(const LinearProgram& lp, double delta);

/// x̂ = R · xbar[0..n). Entries of xbar below −1e-12 are a domain error; tiny
/// negatives above that are clamped to zero.
Vector recover_solution(std::span<const double> xbar, const ReformulatedLP& refm,
                        const LinearProgram& lp);

/// Σ x_i s_i.
double duality_gap(std::span<const double> x, std::span<const double> s);

/// ‖A x − b‖₁.
double primal_infeasibility_l1(const LinearProgram& lp, std::span<const double> x);

/// The tolerance 2δ(R Σ|A_ij| + ‖b‖₁) on ‖Ax̂ − b‖₁ guaranteed after recovery.
double infeasibility_bound(const LinearProgram& lp, double delta);

}  // namespace stochlp
