#include "stochlp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "stochlp/projection_maintainer.hpp"

namespace stochlp {

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::paper: return "paper";
    case Mode::practical: return "practical";
    case Mode::ultra_short: return "ultra_short";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
  if (text == "paper") return Mode::paper;
  if (text == "practical") return Mode::practical;
  if (text == "ultra_short" || text == "ultra-short") return Mode::ultra_short;
  return std::nullopt;
}

SolverParameters derive_parameters(const SolverConfig& config, std::size_t n) {
  if (!(config.delta > 0.0 && config.delta <= 1.0))
    throw Error(Errc::domain_error, "solver: delta must lie in (0, 1]");
  SolverParameters p;
  p.n = n;
  p.log_n = clamped_log(n);
  const double L = p.log_n;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  switch (config.mode) {
    case Mode::paper:
      p.eps = 1.0 / (40000.0 * L);
      p.eps_mp = 1.0 / 40000.0;
      p.k = 1000.0 * p.eps * sqrt_n * L * L / p.eps_mp;
      p.lambda = 40.0 * L;
      p.a = std::min(kDualExponent, 2.0 / 3.0);
      break;
    case Mode::practical:
    case Mode::ultra_short:
      p.eps = 1.0 / (40.0 * L);
      p.eps_mp = 1.0 / 40.0;
      p.k = std::ceil(10.0 * p.eps * sqrt_n * L * L / p.eps_mp);
      p.lambda = 10.0 * L;
      p.a = 1.0 / 3.0;
      if (config.mode == Mode::ultra_short) {
        p.eps = 1.0 / sqrt_n;
        p.a = std::min(1.0 / 3.0, kDualExponent);
      }
      break;
  }
  if (config.a) p.a = *config.a;
  p.k = std::max(p.k, 1.0);
  p.delta = std::min(config.delta / 2.0, 1.0 / p.lambda);
  p.t_final = p.delta * p.delta / (2.0 * static_cast<double>(n));
  p.shrink = p.eps / (3.0 * sqrt_n);
  p.iteration_bound = static_cast<std::size_t>(
                          std::ceil(3.0 * sqrt_n / p.eps *
                                    std::log(2.0 * static_cast<double>(n) / (p.delta * p.delta)))) +
                      1;
  return p;
}

std::string format_trace_row(const TraceRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu,%zu,%zu,%.17g", row.iter, row.t, row.phi,
                row.r_k, row.support, row.resamples, row.gap);
  return buf;
}

namespace {

// δ_μ from a cached gradient of Φ at the current centrality vector.
void delta_mu_from_gradient(std::span<const double> mu, std::span<const double> grad, double t,
                            double t_new, double eps, std::span<double> out,
                            double damping = 1.0) {
  const double decrease = t_new / t - 1.0;
  const double gnorm = norm2(grad);
  const double coef = gnorm < 1e-14 ? 0.0 : damping * 0.5 * eps * t_new / gnorm;
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = decrease * mu[i] - coef * grad[i];
}

double max_abs(std::span<const double> v) { return norm_inf(v); }

double primal_residual_inf(const Matrix& a, std::span<const double> b, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    worst = std::max(worst, std::abs(dot(a.row(i), x) - b[i]));
  return worst;
}

}  // namespace

Vector compute_delta_mu(std::span<const double> x, std::span<const double> s, double t,
                        double t_new, double eps, const CoshPotential& potential) {
  const std::size_t n = x.size();
  if (s.size() != n) throw Error(Errc::dimension_mismatch, "compute_delta_mu: length mismatch");
  Vector mu(n), r(n), grad(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = x[i] * s[i];
    r[i] = mu[i] / t - 1.0;
  }
  potential.gradient(r, grad);
  delta_mu_from_gradient(mu, grad, t, t_new, eps, out);
  return out;
}

SolveReport solve(const LinearProgram& lp, const SolverConfig& config) {
  const std::size_t n = lp.num_variables() + 2;
  SolveReport report;
  report.params = derive_parameters(config, n);
  const SolverParameters& prm = report.params;
  const Kernels kernels = config.deterministic_kernels ? Kernels::sequential : Kernels::parallel;

  const ReformulatedLP refm = reformulate(lp, prm.delta);
  const Matrix& abar = refm.lp.A;
  const Vector& bbar = refm.lp.b;

  IterateState st;
  st.x = refm.x0;
  st.s = refm.s0;
  st.t = 1.0;
  st.mu.resize(n);

  Vector w(n), r(n), grad(n), dmu(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = st.x[i] / st.s[i];

  MaintainerOptions mopts;
  mopts.eps_mp = prm.eps_mp;
  mopts.a = prm.a;
  mopts.omega = config.omega;
  mopts.refresh_every = config.refresh_every;
  mopts.kernels = kernels;
  ProjectionMaintainer mp(abar, w, mopts);

  StepOptions sopts;
  sopts.k = prm.k;
  sopts.max_resamples = config.max_resamples;
  StochasticStepper stepper(n, sopts);
  Rng rng(config.seed);
  const CoshPotential potential(prm.lambda);
  const double phi_limit = std::pow(static_cast<double>(n), 3);

  auto refresh_potential = [&](const IterateState& state) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = state.mu[i] / state.t - 1.0;
      worst = std::max(worst, std::abs(r[i]));
    }
    return std::pair{potential.value_and_gradient(r, grad), worst};
  };

  for (std::size_t i = 0; i < n; ++i) st.mu[i] = st.x[i] * st.s[i];
  st.phi = refresh_potential(st).first;

  std::unique_ptr<std::ofstream> trace_file;
  if (config.trace_path) {
    trace_file = std::make_unique<std::ofstream>(*config.trace_path);
    if (!*trace_file)
      throw Error(Errc::io_error, "cannot open trace file " + *config.trace_path);
    *trace_file << kTraceHeader << '\n';
  }

  const std::size_t max_iters = config.max_iters > 0 ? config.max_iters : prm.iteration_bound;
  const double a_scale = abar.frobenius_norm();
  Vector mu_new(n);
  std::string line;

  while (st.t > prm.t_final) {
    if (report.iterations >= max_iters) break;
    const double t_new = (1.0 - prm.shrink) * st.t;
    delta_mu_from_gradient(st.mu, grad, st.t, t_new, prm.eps, dmu);

    bool fallback = false;
    const StepResult* step = nullptr;
    for (std::size_t attempt = 0;; ++attempt) {
      try {
        step = &stepper.step(mp, st.x, st.s, dmu, rng);
        if (attempt > 0) ++report.damped_steps;
        break;
      } catch (const Error& e) {
        if (e.code() != Errc::step_unbounded && e.code() != Errc::positivity_lost) throw;
        if (e.code() == Errc::positivity_lost || attempt >= config.damping_retries) {
          fallback = true;
          ++report.step_failures;
          break;
        }
      }
      ++report.damping_retries;
      delta_mu_from_gradient(st.mu, grad, st.t, t_new, prm.eps, dmu,
                             std::ldexp(1.0, -static_cast<int>(attempt + 1)));
    }

    double phi_new = 0.0;
    double centrality = 0.0;
    if (!fallback) {
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mu_new[i] = step->x_new[i] * step->s_new[i];
        r[i] = mu_new[i] / t_new - 1.0;
        worst = std::max(worst, std::abs(r[i]));
      }
      try {
        phi_new = potential.value_and_gradient(r, grad);
      } catch (const Error& e) {
        if (e.code() != Errc::potential_overflow) throw;
        fallback = true;
      }
      centrality = worst;
      if (!fallback && (phi_new > phi_limit || worst > config.centrality_limit)) fallback = true;
    }

    TraceRow row;
    if (fallback) {
      auto cs = classical_step(st.x, st.s, t_new, abar,
                               config.classical_relative_target * t_new, kernels);
      st.x = std::move(cs.x);
      st.s = std::move(cs.s);
      st.t = t_new;
      for (std::size_t i = 0; i < n; ++i) {
        st.mu[i] = st.x[i] * st.s[i];
        w[i] = st.x[i] / st.s[i];
      }
      mp.reinitialize(w);
      const auto [phi, worst] = refresh_potential(st);
      st.phi = phi;
      centrality = worst;
      ++report.fallbacks;
      report.max_centrality_after_fallback =
          std::max(report.max_centrality_after_fallback, worst);
      row.support = n;
    } else {
      if (config.audit_steps) {
        auto& au = report.audit;
        ++au.accepted_steps;
        const Vector ad = mat_vec(abar, step->delta_x);
        au.max_null_residual =
            std::max(au.max_null_residual, max_abs(ad) / (a_scale * norm2(st.x)));
        const auto vt = mp.vtilde();
        for (std::size_t i = 0; i < n; ++i) {
          const double xs = st.x[i] * st.s[i];
          au.max_product_error = std::max(
              au.max_product_error, std::abs(step->xbar[i] * step->sbar[i] - xs) / xs);
          au.max_ratio_error = std::max(
              au.max_ratio_error, std::abs(step->xbar[i] / step->sbar[i] - vt[i]) / vt[i]);
        }
        au.max_mu_ratio = std::max(au.max_mu_ratio, step->mu_ratio_inf);
        const double before = primal_residual_inf(abar, bbar, st.x);
        const double after = primal_residual_inf(abar, bbar, step->x_new);
        const double scale = a_scale * norm2(step->x_new) + norm_inf(bbar);
        au.max_primal_drift = std::max(au.max_primal_drift, (after - before) / scale);
      }
      st.x.assign(step->x_new.begin(), step->x_new.end());
      st.s.assign(step->s_new.begin(), step->s_new.end());
      st.mu.assign(mu_new.begin(), mu_new.end());
      st.t = t_new;
      st.phi = phi_new;
      row.support = step->direction.support.size();
      row.resamples = step->direction.resample_count;
      report.total_resamples += row.resamples;
      report.total_support += row.support;
    }
    report.max_centrality = std::max(report.max_centrality, centrality);

    ++report.iterations;
    row.iter = report.iterations;
    row.t = st.t;
    row.phi = st.phi;
    row.r_k = fallback ? 0 : mp.counters().last_rank;
    row.gap = dot(st.x, st.s);
    if (config.record_trace) report.trace.push_back(row);
    if (trace_file) {
      line = format_trace_row(row);
      *trace_file << line << '\n';
    }
  }

  report.converged = st.t <= prm.t_final;
  report.t_final = st.t;
  report.xbar = st.x;
  report.sbar = st.s;
  report.theta = st.x[refm.theta_index()];
  report.final_gap = dot(st.x, st.s);
  report.x_hat = recover_solution(st.x, refm, lp);
  report.objective = lp.objective(report.x_hat);
  report.primal_infeas_l1 = primal_infeasibility_l1(lp, report.x_hat);
  report.maintainer_counters = mp.counter_rows();
  if (config.recover_dual) report.ybar = recover_dual(abar, refm.lp.c, st.s);
  return report;
}

}  // namespace stochlp
