#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "stochlp/dense_linalg.hpp"
#include "stochlp/lp_model.hpp"

namespace stochlp {

enum class OracleStatus { optimal, infeasible, unbounded_flagged };
std::string_view to_string(OracleStatus status) noexcept;

struct OracleResult {
  double optimum = 0.0;
  Vector argmin;
  OracleStatus status = OracleStatus::infeasible;
  // Enumeration statistics.
  std::uint64_t bases_examined = 0;
  std::uint64_t feasible_bases = 0;
  // Short-step IPM statistics.
  std::size_t iterations = 0;
  double t_final = 0.0;
  double final_gap = 0.0;
  double primal_infeas_l1 = 0.0;
};

struct EnumerationLimits {
  std::size_t max_n = 24;
  std::uint64_t max_bases = 5'000'000;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k) noexcept;

/// True when the instance is small enough for vertex enumeration.
bool enumeration_feasible(std::size_t d, std::size_t n, const EnumerationLimits& limits = {});

/// Brute force over all d-column bases. Bases with relative determinant below
/// 1e-12 are skipped; x_B ≥ −1e-10 counts as feasible. Ties keep the
/// lexicographically first basis, also in the parallel path. Throws
/// Errc::oracle_refused beyond the limits.
OracleResult vertex_enumerate_solve(const LinearProgram& lp,
                                    Kernels kernels = Kernels::sequential,
                                    const EnumerationLimits& limits = {});

/// √W Aᵀ(AWAᵀ)⁻¹A√W h recomputed from a fresh factorization, without forming
/// the n×n projection.
Vector naive_projection_apply(const Matrix& a, std::span<const double> w,
                              std::span<const double> h);

/// Textbook short-step path following with exact Newton steps on the
/// feasible-start reformulation (t shrinks by 1 − 1/(4√n) per iteration).
OracleResult reference_ipm(const LinearProgram& lp, double delta);

}  // namespace stochlp
