#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "stochlp/random_lp.hpp"
#include "stochlp/reference_oracle.hpp"
#include "stochlp/solver.hpp"

using namespace stochlp;

namespace {

LinearProgram tiny() {
  return LinearProgram::make(Matrix::from_rows({{1, 1}}), {1}, {-1, 0}, 2.0, 1.0, "tiny");
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_mode("paper") == Mode::paper);
  CHECK(parse_mode("practical") == Mode::practical);
  CHECK(parse_mode("ultra_short") == Mode::ultra_short);
  CHECK_FALSE(parse_mode("fast"));
  CHECK(to_string(Mode::paper) == "paper");
}

TEST_CASE("derived parameters") {
  SolverConfig cfg;
  const auto p = derive_parameters(cfg, 20);
  const double L = std::log(20.0);
  CHECK(p.eps == doctest::Approx(1.0 / (40 * L)));
  CHECK(p.eps_mp == 1.0 / 40.0);
  CHECK(p.k == std::ceil(10 * p.eps * std::sqrt(20.0) * L * L * 40));
  CHECK(p.lambda == doctest::Approx(10 * L));
  CHECK(p.a == 1.0 / 3.0);
  CHECK(p.delta == doctest::Approx(std::min(5e-4, 1 / (10 * L))));
  CHECK(p.t_final == doctest::Approx(p.delta * p.delta / 40));

  cfg.mode = Mode::paper;
  const auto q = derive_parameters(cfg, 20);
  CHECK(q.eps == doctest::Approx(1.0 / (40000 * L)));
  CHECK(q.eps_mp == 1.0 / 40000.0);
  CHECK(q.k == doctest::Approx(1000 * q.eps * std::sqrt(20.0) * L * L * 40000));
  CHECK(q.lambda == doctest::Approx(40 * L));
  CHECK(q.a == kDualExponent);

  cfg.a = 0.4;
  CHECK(derive_parameters(cfg, 20).a == 0.4);
  // log n is clamped at n = 3.
  CHECK(derive_parameters(cfg, 2).log_n == std::log(3.0));
  cfg.delta = 0.0;
  CHECK_THROWS_AS(derive_parameters(cfg, 20), Error);
}

TEST_CASE("compute_delta_mu examples") {
  const CoshPotential pot(10.0);
  const Vector x{1, 2, 0.5}, s{2, 1, 4};  // xs = 2
  const Vector z = compute_delta_mu(x, s, 2.0, 2.0, 0.01, pot);
  for (double v : z) CHECK(v == 0.0);

  const double eps = 0.01, t = 2.0, t_new = (1 - eps / (3 * std::sqrt(3.0))) * t;
  const Vector d = compute_delta_mu(x, s, t, t_new, eps, pot);
  for (double v : d) CHECK(v == doctest::Approx(t_new - t).epsilon(1e-14));
  CHECK(norm2(d) <= eps * t);

  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 40;
    const double e = 1.0 / (40 * clamped_log(n));
    const CoshPotential p(10 * clamped_log(n));
    Vector xx(n), ss(n);
    const double tt = 0.1 + rng.uniform();
    for (std::size_t i = 0; i < n; ++i) {
      xx[i] = 0.1 + rng.uniform();
      ss[i] = tt * (1 + 0.2 * (rng.uniform() - 0.5)) / xx[i];
    }
    const double tn = (1 - e / (3 * std::sqrt(double(n)))) * tt;
    CHECK(norm2(compute_delta_mu(xx, ss, tt, tn, e, p)) <= e * tt);
  }
}

TEST_CASE("classical step") {
  Rng rng(6);
  const std::size_t d = 3, n = 10;
  const Matrix a = testing::random_matrix(d, n, rng);

  SUBCASE("centered input is returned unchanged") {
    Vector x = testing::random_positive(n, rng), s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = 0.7 / x[i];
    const auto r = classical_step(x, s, 0.7, a, 1e-10);
    CHECK(r.inner_iterations == 0);
    CHECK(r.x == x);
    CHECK(r.s == s);
  }
  SUBCASE("one perturbed coordinate converges quickly") {
    Vector x = testing::random_positive(n, rng), s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = 1.0 / x[i];
    s[4] *= 1.05;
    const auto r = classical_step(x, s, 1.0, a, 1e-8);
    CHECK(r.residual <= 1e-8);
    CHECK(r.inner_iterations <= 50);
    const Vector before = mat_vec(a, x), after = mat_vec(a, r.x);
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(before[i] - after[i]) <= 1e-12);
  }
  SUBCASE("contract on 100 seeded instances") {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t nn = 4 + trial % 20, dd = 1 + trial % 3;
      const Matrix aa = testing::random_matrix(dd, nn, rng);
      Vector x = testing::random_positive(nn, rng), s(nn);
      const double t = 0.01 + rng.uniform();
      for (std::size_t i = 0; i < nn; ++i) s[i] = t * (1 + 0.5 * (rng.uniform() - 0.5)) / x[i];
      const double target = 1e-6 * t;
      const auto r = classical_step(x, s, t, aa, target);
      CHECK(r.residual <= target);
      for (std::size_t i = 0; i < nn; ++i) {
        CHECK(r.x[i] > 0);
        CHECK(r.s[i] > 0);
      }
    }
  }
}

TEST_CASE("solve the two-variable example") {
  SolverConfig cfg;
  cfg.seed = 7;
  const auto lp = tiny();
  const auto rep = solve(lp, cfg);
  CHECK(rep.converged);
  CHECK(rep.objective <= -1.0 + cfg.delta * 1.0 * 2.0 + 1e-9);
  CHECK(rep.primal_infeas_l1 <= infeasibility_bound(lp, cfg.delta));
  CHECK(rep.theta <= 2 * cfg.delta);
  CHECK(rep.trace.size() == rep.iterations);
  CHECK(rep.iterations <= rep.params.iteration_bound);
  CHECK(rep.max_centrality <= 0.1);

  // Monotone schedule.
  double t = 1.0;
  for (const auto& row : rep.trace) {
    CHECK(row.t == doctest::Approx((1 - rep.params.shrink) * t).epsilon(1e-15));
    t = row.t;
  }
}

TEST_CASE("zero objective still meets the infeasibility bound") {
  const auto lp = LinearProgram::make(Matrix::from_rows({{1, 1, 1}, {1, -1, 0}}), {3, 0},
                                      {0, 0, 0}, 6.0);
  SolverConfig cfg;
  const auto rep = solve(lp, cfg);
  CHECK(rep.converged);
  CHECK(rep.primal_infeas_l1 <= infeasibility_bound(lp, cfg.delta));
}

TEST_CASE("random instances meet the optimality bounds") {
  const auto suite = random_suite(4, 99);
  for (const auto& lp : suite) {
    SolverConfig cfg;
    cfg.seed = 3;
    cfg.audit_steps = true;
    const auto rep = solve(lp, cfg);
    const auto orc = vertex_enumerate_solve(lp);
    REQUIRE(orc.status == OracleStatus::optimal);
    CHECK(rep.converged);
    CHECK(rep.objective <= orc.optimum + cfg.delta * norm_inf(lp.c) * lp.diameter + 1e-6);
    CHECK(rep.primal_infeas_l1 <= infeasibility_bound(lp, cfg.delta));
    CHECK(rep.audit.max_null_residual <= 1e-8);
    CHECK(rep.audit.max_product_error <= 1e-12);
    CHECK(rep.max_centrality <= 0.1);
  }
}

TEST_CASE("iteration cap reports a partial, nonconverged solve") {
  SolverConfig cfg;
  cfg.max_iters = 10;
  const auto rep = solve(tiny(), cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 10);
}

TEST_CASE("sequential mode is deterministic and the trace file matches") {
  const auto lp = random_feasible_lp(3, 9, 5);
  SolverConfig cfg;
  cfg.seed = 11;
  cfg.max_iters = 400;
  const std::string path = "solver_trace_test.csv";
  cfg.trace_path = path;
  const auto a = solve(lp, cfg);
  cfg.trace_path.reset();
  const auto b = solve(lp, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i)
    CHECK(format_trace_row(a.trace[i]) == format_trace_row(b.trace[i]));
  CHECK(a.x_hat == b.x_hat);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    REQUIRE(rows < a.trace.size());
    CHECK(line == format_trace_row(a.trace[rows]));
    ++rows;
  }
  CHECK(rows == a.iterations);
  std::remove(path.c_str());
}

TEST_CASE("dual recovery") {
  SolverConfig cfg;
  cfg.recover_dual = true;
  const auto rep = solve(tiny(), cfg);
  REQUIRE(rep.ybar);
  CHECK(rep.ybar->size() == 2);
}

TEST_CASE("trace row formatting") {
  TraceRow row{3, 0.5, 4.0, 2, 7, 1, 0.1};
  CHECK(format_trace_row(row) == "3,0.5,4,2,7,1,0.10000000000000001");
}
