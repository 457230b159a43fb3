#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "stochlp/dense_linalg.hpp"
#include "stochlp/projection_maintainer.hpp"

namespace stochlp {

/// Seeded generator owned by one solve. uniform() maps the top 53 bits of a
/// 64-bit Mersenne twister draw to [0, 1), which is identical on every
/// platform (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Unbiased sparse surrogate of a direction δ_μ: coordinate i is kept with
/// probability p_i = min(1, k(δ_i²/‖δ‖² + 1/n)) and rescaled by 1/p_i.
struct SparseDirection {
  Vector values;
  std::vector<std::size_t> support;
  Vector probs;
  std::size_t resample_count = 0;
  bool degenerate = false;  // δ_μ was identically zero
};

/// Fills probs for δ_μ and k. Returns false (all probs set to 1) when δ_μ = 0.
bool sampling_probabilities(std::span<const double> delta_mu, double k, std::span<double> probs);

/// Draws values/support given precomputed probs. Coordinates with p_i = 1 do
/// not consume a random draw.
void draw_sparse_direction(std::span<const double> delta_mu, std::span<const double> probs,
                           Rng& rng, SparseDirection& out);

SparseDirection sample_sparse_direction(std::span<const double> delta_mu, double k, Rng& rng);

struct StepOptions {
  double k = 1.0;
  std::size_t max_resamples = 100;
  /// Acceptance bound on ‖x̄⁻¹δ̃_x‖_∞ and ‖s̄⁻¹δ̃_s‖_∞; values ≤ 0 select
  /// 1/(100 log n).
  double step_bound = 0.0;
};

struct StepResult {
  Vector x_new, s_new;
  Vector delta_x, delta_s;
  Vector xbar, sbar;
  SparseDirection direction;
  /// ‖δ̃_μ / (x s)‖_∞ of the accepted draw; monitored, never resampled on.
  double mu_ratio_inf = 0.0;
};

/// One approximate Newton step through the maintained projection.
///
/// Updates the maintainer with w = x/s, rescales to (x̄, s̄) with x̄/s̄ = ṽ and
/// x̄s̄ = xs, then draws sparse directions until both relative step norms are
/// within the bound. Throws Errc::step_unbounded after max_resamples redraws
/// and Errc::positivity_lost if the accepted step leaves the positive orthant.
class StochasticStepper {
 public:
  StochasticStepper(std::size_t n, const StepOptions& options);

  const StepResult& step(ProjectionMaintainer& mp, std::span<const double> x,
                         std::span<const double> s, std::span<const double> delta_mu, Rng& rng);

  const StepOptions& options() const noexcept { return options_; }
  double step_bound() const noexcept { return bound_; }
  const StepResult& result() const noexcept { return result_; }

 private:
  std::size_t n_;
  StepOptions options_;
  double bound_;
  StepResult result_;
  Vector w_, root_, h_, pmu_;
};

StepResult stochastic_step(ProjectionMaintainer& mp, std::span<const double> x,
                           std::span<const double> s, std::span<const double> delta_mu,
                           const StepOptions& options, Rng& rng);

}  // namespace stochlp
