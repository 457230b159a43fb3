#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochlp/dense_linalg.hpp"
#include "stochlp/lp_model.hpp"
#include "stochlp/potential.hpp"
#include "stochlp/stochastic_step.hpp"

namespace stochlp {

/// Parameter families for the outer loop.
///  paper:       ε = 1/(40000 log n), ε_mp = 1/40000, k = 1000ε√n log²n/ε_mp,
///               λ = 40 log n, a = min(0.31389, 2/3)
///  practical:   ε = 1/(40 log n), ε_mp = 1/40, k = ⌈10ε√n log²n/ε_mp⌉,
///               λ = 10 log n, a = 1/3
///  ultra_short: practical constants with ε = 1/√n and a = min(1/3, 0.31389)
enum class Mode { paper, practical, ultra_short };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

/// Dual exponent of rectangular matrix multiplication used by paper mode.
inline constexpr double kDualExponent = 0.31389;

struct SolverConfig {
  double delta = 1e-3;
  Mode mode = Mode::practical;
  std::optional<double> a;  // overrides the mode's batch exponent
  double omega = 2.373;
  std::uint64_t seed = 0;
  std::size_t max_iters = 0;  // 0: the schedule bound plus one
  std::size_t max_resamples = 100;
  std::optional<std::string> trace_path;
  bool deterministic_kernels = true;
  /// Keep trace rows in the report. Paper-mode runs take ~10⁷ iterations, so
  /// long runs switch this off and stream to trace_path instead.
  bool record_trace = true;
  /// Check the step identities on every accepted stochastic step.
  bool audit_steps = false;
  /// Least-squares dual recovery at termination.
  bool recover_dual = false;
  std::size_t refresh_every = 50;
  /// Centering target of the classical fallback, relative to t.
  double classical_relative_target = 1e-2;
  /// Fallback also triggers when max |x_i s_i/t − 1| exceeds this.
  double centrality_limit = 0.1;
  /// On step_unbounded, retry up to this many times with the centering term
  /// of δ_μ halved each time before falling back to the classical step.
  std::size_t damping_retries = 4;
};

/// Values derived from the mode for a reformulated problem of size n.
struct SolverParameters {
  std::size_t n = 0;
  double log_n = 1.0;
  double eps = 0.0;
  double eps_mp = 0.0;
  double k = 1.0;
  double lambda = 1.0;
  double a = 1.0 / 3.0;
  double delta = 0.0;      // min(δ/2, 1/λ)
  double t_final = 0.0;    // δ²/(2n)
  double shrink = 0.0;     // ε/(3√n)
  std::size_t iteration_bound = 0;
};

SolverParameters derive_parameters(const SolverConfig& config, std::size_t n);

struct IterateState {
  Vector x, s;
  double t = 1.0;
  Vector mu;
  double phi = 0.0;
};

struct TraceRow {
  std::size_t iter = 0;
  double t = 0.0;
  double phi = 0.0;
  std::size_t r_k = 0;
  std::size_t support = 0;
  std::size_t resamples = 0;
  double gap = 0.0;
};

inline constexpr std::string_view kTraceHeader = "iter,t,phi,r_k,support,resamples,gap";
/// One CSV line (no newline), every real with 17 significant digits.
std::string format_trace_row(const TraceRow& row);

struct StepAudit {
  std::size_t accepted_steps = 0;
  double max_null_residual = 0.0;   // ‖Āδ̃_x‖_∞ / (‖Ā‖_F ‖x‖₂)
  double max_product_error = 0.0;   // max |x̄s̄ − xs| / (xs)
  double max_ratio_error = 0.0;     // max |x̄/s̄ − ṽ| / ṽ
  double max_mu_ratio = 0.0;        // ‖δ̃_μ/(xs)‖_∞
  double max_primal_drift = 0.0;    // growth of ‖Āx − b̄‖_∞ per iteration, scale-relative
};

struct SolveReport {
  Vector x_hat;
  double objective = 0.0;
  double primal_infeas_l1 = 0.0;
  std::size_t iterations = 0;
  std::size_t fallbacks = 0;
  bool converged = false;
  std::vector<TraceRow> trace;

  SolverParameters params;
  Vector xbar, sbar;
  std::optional<Vector> ybar;
  double t_final = 0.0;
  double theta = 0.0;
  double final_gap = 0.0;
  std::size_t total_resamples = 0;
  std::size_t total_support = 0;
  std::size_t step_failures = 0;  // fallbacks caused by step errors
  std::size_t damped_steps = 0;   // accepted steps that needed a damping retry
  std::size_t damping_retries = 0;
  double max_centrality = 0.0;    // max over iterations of max_i |x_i s_i/t − 1|
  double max_centrality_after_fallback = 0.0;
  std::vector<std::pair<std::string, double>> maintainer_counters;
  StepAudit audit;
};

/// δ_μ = (t_new/t − 1)·xs − (ε/2)·t_new·∇Φ_λ(xs/t − 1)/‖∇Φ_λ(xs/t − 1)‖₂. The
/// second term is dropped when the gradient norm is below 1e-14.
Vector compute_delta_mu(std::span<const double> x, std::span<const double> s, double t,
                        double t_new, double eps, const CoshPotential& potential);

struct ClassicalStepResult {
  Vector x, s;
  std::size_t inner_iterations = 0;
  double residual = 0.0;  // ‖xs − t_new‖₂
};

/// Deterministic recentering at t_new with exact projections. Throws
/// Errc::centering_failed after 64·⌈√n log n⌉ inner iterations.
ClassicalStepResult classical_step(std::span<const double> x, std::span<const double> s,
                                   double t_new, const Matrix& a, double eps_target,
                                   Kernels kernels = Kernels::sequential);

/// Runs the stochastic central path method on the feasible-start
/// reformulation of `lp` and maps the result back to the original variables.
SolveReport solve(const LinearProgram& lp, const SolverConfig& config);

/// Least-squares y for Āᵀy ≈ c̄ − s.
Vector recover_dual(const Matrix& a, std::span<const double> c, std::span<const double> s);

}  // namespace stochlp
