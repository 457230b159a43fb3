#pragma once

#include <cstdint>
#include <vector>

#include "stochlp/lp_model.hpp"
#include "stochlp/reference_oracle.hpp"

namespace stochlp {

/// A random feasible, bounded instance with b = A·x₀ for x₀ ∈ (0.5, 1.5)ⁿ and
/// R = 2‖x₀‖₁.
///
/// Row 0 of A has entries in [1, 2], so every feasible x has
/// ‖x‖₁ ≤ b₀ ≤ 2‖x₀‖₁ = R; the remaining rows are standard normal. c is
/// standard normal.
LinearProgram random_feasible_lp(std::size_t d, std::size_t n, std::uint64_t seed);

struct SuiteShape {
  std::size_t d_min = 3, d_max = 10;
  std::size_t n_min = 6, n_max = 30;
};

/// `count` instances with (d, n) drawn uniformly from the shape and redrawn
/// until vertex enumeration accepts them under `limits`.
std::vector<LinearProgram> random_suite(std::size_t count, std::uint64_t seed,
                                        const SuiteShape& shape = {},
                                        const EnumerationLimits& limits = {});

}  // namespace stochlp
