#include "stochlp/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochlp/instance_io.hpp"
#include "stochlp/potential.hpp"
#include "stochlp/projection_maintainer.hpp"
#include "stochlp/random_lp.hpp"
#include "stochlp/reference_oracle.hpp"
#include "stochlp/solver.hpp"

namespace stochlp::cli {

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::io_error:
    case Errc::dimension_mismatch:
    case Errc::domain_error:
    case Errc::rank_deficient:
    case Errc::oracle_refused:
      return kInputError;
    default:
      return kNumericalFailure;
  }
}

struct SolveArgs {
  std::string file;
  double delta = 1e-3;
  std::string mode = "practical";
  std::uint64_t seed = 0;
  std::optional<double> a;
  double omega = 2.373;
  std::string trace;
  std::size_t max_iters = 0;
  bool json = false;
};

int run_solve(const SolveArgs& args, std::ostream& out) {
  const LinearProgram lp = load_instance(args.file);
  SolverConfig cfg;
  cfg.delta = args.delta;
  const auto mode = parse_mode(args.mode);
  if (!mode) throw Error(Errc::domain_error, "unknown mode '" + args.mode + "'");
  cfg.mode = *mode;
  cfg.seed = args.seed;
  cfg.a = args.a;
  cfg.omega = args.omega;
  cfg.max_iters = args.max_iters;
  cfg.record_trace = false;
  if (!args.trace.empty()) cfg.trace_path = args.trace;

  const SolveReport rep = solve(lp, cfg);
  if (args.json) {
    nlohmann::json j;
    j["name"] = lp.name;
    j["objective"] = rep.objective;
    j["infeasibility_l1"] = rep.primal_infeas_l1;
    j["iterations"] = rep.iterations;
    j["fallbacks"] = rep.fallbacks;
    j["converged"] = rep.converged;
    j["x_hat"] = rep.x_hat;
    j["theta"] = rep.theta;
    j["mode"] = to_string(cfg.mode);
    j["delta"] = cfg.delta;
    nlohmann::json counters = nlohmann::json::object();
    for (const auto& [k, v] : rep.maintainer_counters) counters[k] = v;
    j["counters"] = counters;
    out << j.dump(2) << '\n';
  } else {
    out << "objective: " << format_real(rep.objective) << '\n'
        << "infeasibility_l1: " << format_real(rep.primal_infeas_l1) << '\n'
        << "iterations: " << rep.iterations << '\n'
        << "fallbacks: " << rep.fallbacks << '\n'
        << "converged: " << (rep.converged ? "true" : "false") << '\n';
  }
  return rep.converged ? kSuccess : kNonconverged;
}

int run_oracle(const std::string& file, std::ostream& out) {
  const LinearProgram lp = load_instance(file);
  const OracleResult res = vertex_enumerate_solve(lp, Kernels::parallel);
  out << "status: " << to_string(res.status) << '\n';
  if (res.status == OracleStatus::infeasible) return kSuccess;
  out << "optimum: " << format_real(res.optimum) << '\n' << "argmin:";
  for (double v : res.argmin) out << ' ' << format_real(v);
  out << '\n';
  return kSuccess;
}

struct DriftArgs {
  std::size_t n = 64;
  std::size_t d = 0;
  std::size_t steps = 0;
  double eps_mp = 0.25 - 1e-12;
  double a = 1.0 / 3.0;
  std::uint64_t seed = 1;
  std::string model = "uniform";
};

int run_drift(const DriftArgs& args, std::ostream& out, std::ostream& err) {
  if (args.n < 2) throw Error(Errc::domain_error, "bench drift: n must be at least 2");
  const std::size_t d = args.d ? args.d : std::max<std::size_t>(1, args.n / 2);
  const std::size_t steps =
      args.steps ? args.steps
                 : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(args.n))));
  if (args.model != "uniform" && args.model != "random")
    throw Error(Errc::domain_error, "bench drift: model must be uniform or random");

  const LinearProgram lp = random_feasible_lp(d, args.n, args.seed);
  Vector w(args.n, 1.0);
  MaintainerOptions opts;
  opts.eps_mp = args.eps_mp;
  opts.a = args.a;
  ProjectionMaintainer mp(lp.A, w, opts);
  const WeightSchedule sched(args.n, args.a, opts.omega);
  const SoftErrorPotential psi(args.eps_mp);
  Rng rng(args.seed + 7);

  const double growth = 1.0 / std::sqrt(static_cast<double>(args.n));
  Vector err_vec(args.n), step(args.n);
  out << "step,r_k,total_rank,weighted_cost,tilde_support,psi_potential\n";
  for (std::size_t k = 1; k <= steps; ++k) {
    if (args.model == "uniform") {
      for (double& v : w) v *= 1.0 + growth;
    } else {
      // Relative ℓ₂ drift 0.1 with coordinates capped at 0.25.
      double norm = 0.0;
      for (double& v : step) {
        v = rng.uniform() - 0.5;
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < args.n; ++i)
        w[i] *= 1.0 + std::clamp(0.1 * step[i] / norm, -0.25, 0.25);
    }
    mp.update(w);
    for (std::size_t i = 0; i < args.n; ++i) err_vec[i] = w[i] / mp.v()[i] - 1.0;
    const auto& c = mp.counters();
    out << k << ',' << c.last_rank << ',' << c.total_rank << ',' << format_real(c.weighted_cost)
        << ',' << mp.tilde_support().size() << ','
        << format_real(maintenance_potential(sched, psi, err_vec)) << '\n';
  }
  for (const auto& [key, value] : mp.counter_rows()) err << "# " << key << '=' << value << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic central path LP solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("file", solve_args.file, "Instance file (JSON)")->required();
  solve_cmd->add_option("--delta", solve_args.delta, "Target accuracy in (0, 1]");
  solve_cmd->add_option("--mode", solve_args.mode, "paper | practical");
  solve_cmd->add_option("--seed", solve_args.seed, "Random seed");
  solve_cmd->add_option("--a", solve_args.a, "Batch exponent override");
  solve_cmd->add_option("--omega", solve_args.omega, "Matrix multiplication exponent");
  solve_cmd->add_option("--trace", solve_args.trace, "Write per-iteration CSV");
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "Iteration cap (0 = schedule bound)");
  solve_cmd->add_flag("--json", solve_args.json, "Emit a JSON report");

  std::string oracle_file;
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve by vertex enumeration");
  oracle_cmd->add_option("file", oracle_file, "Instance file (JSON)")->required();

  DriftArgs drift;
  auto* bench_cmd = app.add_subcommand("bench", "Counter benchmarks");
  bench_cmd->require_subcommand(1);
  auto* drift_cmd = bench_cmd->add_subcommand("drift", "Projection maintenance under drift");
  drift_cmd->add_option("--n", drift.n, "Number of columns");
  drift_cmd->add_option("--d", drift.d, "Number of rows (default n/2)");
  drift_cmd->add_option("--steps", drift.steps, "Number of updates (default ceil(sqrt n))");
  drift_cmd->add_option("--eps-mp", drift.eps_mp, "Tolerance in (0, 1/4)");
  drift_cmd->add_option("--a", drift.a, "Batch exponent");
  drift_cmd->add_option("--seed", drift.seed, "Random seed");
  drift_cmd->add_option("--model", drift.model, "uniform | random");

  std::size_t gen_d = 3, gen_n = 8;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a random feasible instance");
  gen_cmd->add_option("--d", gen_d, "Rows");
  gen_cmd->add_option("--n", gen_n, "Columns");
  gen_cmd->add_option("--seed", gen_seed, "Random seed");
  gen_cmd->add_option("-o,--output", gen_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*solve_cmd) return run_solve(solve_args, out);
    if (*oracle_cmd) return run_oracle(oracle_file, out);
    if (*drift_cmd) return run_drift(drift, out, err);
    if (*gen_cmd) {
      const LinearProgram lp = random_feasible_lp(gen_d, gen_n, gen_seed);
      if (gen_out.empty())
        out << write_instance(lp);
      else
        save_instance(lp, gen_out);
      return kSuccess;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kInputError;
}

}  // namespace stochlp::cli
