#include "stochlp/stochastic_step.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochlp/potential.hpp"

namespace stochlp {

bool sampling_probabilities(std::span<const double> delta_mu, double k, std::span<double> probs) {
  if (!(k >= 1.0)) throw Error(Errc::domain_error, "sampling: k must be at least 1");
  const std::size_t n = delta_mu.size();
  const double total = dot(delta_mu, delta_mu);
  if (total == 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0);
    return false;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    probs[i] = std::min(1.0, k * (delta_mu[i] * delta_mu[i] / total + inv_n));
  return true;
}

void draw_sparse_direction(std::span<const double> delta_mu, std::span<const double> probs,
                           Rng& rng, SparseDirection& out) {
  const std::size_t n = delta_mu.size();
  out.values.assign(n, 0.0);
  out.support.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = probs[i];
    const bool keep = p >= 1.0 || rng.uniform() < p;
    if (keep) {
      out.values[i] = delta_mu[i] / p;
      out.support.push_back(i);
    }
  }
}

SparseDirection sample_sparse_direction(std::span<const double> delta_mu, double k, Rng& rng) {
  SparseDirection out;
  out.probs.resize(delta_mu.size());
  if (!sampling_probabilities(delta_mu, k, out.probs)) {
    out.values.assign(delta_mu.size(), 0.0);
    out.degenerate = true;
    return out;
  }
  draw_sparse_direction(delta_mu, out.probs, rng, out);
  return out;
}

StochasticStepper::StochasticStepper(std::size_t n, const StepOptions& options)
    : n_(n),
      options_(options),
      bound_(options.step_bound > 0.0 ? options.step_bound : 1.0 / (100.0 * clamped_log(n))),
      w_(n),
      root_(n),
      h_(n),
      pmu_(n) {
  auto& r = result_;
  for (Vector* v : {&r.x_new, &r.s_new, &r.delta_x, &r.delta_s, &r.xbar, &r.sbar,
                    &r.direction.values, &r.direction.probs})
    v->resize(n);
  r.direction.support.reserve(n);
}

const StepResult& StochasticStepper::step(ProjectionMaintainer& mp, std::span<const double> x,
                                          std::span<const double> s,
                                          std::span<const double> delta_mu, Rng& rng) {
  if (x.size() != n_ || s.size() != n_ || delta_mu.size() != n_ || mp.dim() != n_)
    throw Error(Errc::dimension_mismatch, "stochastic step: length mismatch");
  auto& r = result_;

  for (std::size_t i = 0; i < n_; ++i) w_[i] = x[i] / s[i];
  const auto vt = mp.update(w_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double ratio = std::sqrt(vt[i] / w_[i]);
    r.xbar[i] = x[i] * ratio;
    r.sbar[i] = s[i] / ratio;
    root_[i] = std::sqrt(r.xbar[i] * r.sbar[i]);
  }

  auto& dir = r.direction;
  dir.resample_count = 0;
  dir.degenerate = !sampling_probabilities(delta_mu, options_.k, dir.probs);
  if (dir.degenerate) {
    std::fill(dir.values.begin(), dir.values.end(), 0.0);
    dir.support.clear();
    std::fill(r.delta_x.begin(), r.delta_x.end(), 0.0);
    std::fill(r.delta_s.begin(), r.delta_s.end(), 0.0);
    r.x_new.assign(x.begin(), x.end());
    r.s_new.assign(s.begin(), s.end());
    r.mu_ratio_inf = 0.0;
    return r;
  }

  for (std::size_t attempt = 0;; ++attempt) {
    draw_sparse_direction(delta_mu, dir.probs, rng, dir);
    for (std::size_t i = 0; i < n_; ++i) h_[i] = dir.values[i] / root_[i];
    mp.query(h_, pmu_);
    double worst_x = 0.0, worst_s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      r.delta_s[i] = (r.sbar[i] / root_[i]) * pmu_[i];
      r.delta_x[i] = dir.values[i] / r.sbar[i] - (r.xbar[i] / root_[i]) * pmu_[i];
      worst_s = std::max(worst_s, std::abs(r.delta_s[i] / r.sbar[i]));
      worst_x = std::max(worst_x, std::abs(r.delta_x[i] / r.xbar[i]));
    }
    if (worst_x <= bound_ && worst_s <= bound_) break;
    // With every p_i = 1 a redraw is the same draw.
    const bool saturated =
        std::all_of(dir.probs.begin(), dir.probs.end(), [](double p) { return p >= 1.0; });
    if (saturated || attempt >= options_.max_resamples)
      throw Error(Errc::step_unbounded,
                  "stochastic step: no bounded draw after " + std::to_string(attempt + 1) +
                      " attempts");
    ++dir.resample_count;
  }

  double mu_ratio = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    r.x_new[i] = x[i] + r.delta_x[i];
    r.s_new[i] = s[i] + r.delta_s[i];
    if (!(r.x_new[i] > 0.0) || !(r.s_new[i] > 0.0))
      throw Error(Errc::positivity_lost, "stochastic step left the positive orthant",
                  static_cast<std::ptrdiff_t>(i));
    mu_ratio = std::max(mu_ratio, std::abs(dir.values[i]) / (x[i] * s[i]));
  }
  r.mu_ratio_inf = mu_ratio;
  return r;
}

StepResult stochastic_step(ProjectionMaintainer& mp, std::span<const double> x,
                           std::span<const double> s, std::span<const double> delta_mu,
                           const StepOptions& options, Rng& rng) {
  StochasticStepper stepper(x.size(), options);
  return stepper.step(mp, x, s, delta_mu, rng);
}

}  // namespace stochlp
