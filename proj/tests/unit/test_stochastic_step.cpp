#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "stochlp/projection_maintainer.hpp"
#include "stochlp/stochastic_step.hpp"

using namespace stochlp;
using testing::random_matrix;
using testing::random_positive;

namespace {

MaintainerOptions mp_opts() {
  MaintainerOptions o;
  o.eps_mp = 0.025;
  o.a = 1.0 / 3.0;
  return o;
}

struct Setup {
  Matrix a;
  Vector x, s, dmu;
};

Setup make_setup(std::size_t d, std::size_t n, std::uint64_t seed, double scale = 1e-3) {
  Rng rng(seed);
  Setup st{random_matrix(d, n, rng), random_positive(n, rng), random_positive(n, rng), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) st.dmu[i] = scale * (rng.uniform() - 0.5) * st.x[i] * st.s[i];
  return st;
}

}  // namespace

TEST_CASE("sampling probabilities examples") {
  Vector probs(4);
  CHECK(sampling_probabilities(Vector{1, 0, 0, 0}, 1.0, probs));
  CHECK(probs[0] == 1.0);
  for (int i = 1; i < 4; ++i) CHECK(probs[i] == 0.25);

  Rng rng(1);
  const Vector dmu{0.3, -0.1, 0.0, 2.0, 1e-9};
  const auto dir = sample_sparse_direction(dmu, 5.0, rng);
  CHECK(dir.values == dmu);
  CHECK(dir.support.size() == 5);
  for (double p : dir.probs) CHECK(p == 1.0);

  const auto zero = sample_sparse_direction(Vector(3, 0.0), 2.0, rng);
  CHECK(zero.degenerate);
  CHECK(zero.support.empty());
  CHECK_THROWS_AS(sampling_probabilities(dmu, 0.5, probs), Error);
}

TEST_CASE("sampled values are δ_i/p_i on the support") {
  Rng rng(3);
  Vector dmu(16);
  for (double& v : dmu) v = rng.uniform() - 0.5;
  for (int trial = 0; trial < 200; ++trial) {
    const auto dir = sample_sparse_direction(dmu, 4.0, rng);
    std::size_t next = 0;
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(dir.probs[i] > 0.0);
      CHECK(dir.probs[i] <= 1.0);
      const bool in = next < dir.support.size() && dir.support[next] == i;
      if (in) {
        CHECK(dir.values[i] == dmu[i] / dir.probs[i]);
        ++next;
      } else {
        CHECK(dir.values[i] == 0.0);
      }
    }
  }
}

TEST_CASE("sampler moments") {
  Rng rng(2026);
  const std::size_t n = 16;
  const double k = 4.0;
  Vector dmu(n);
  for (double& v : dmu) v = rng.uniform() - 0.5;
  dmu[3] = 3.0;
  const double total = dot(dmu, dmu);
  const int draws = 20000;
  Vector sum(n, 0.0), sum2(n, 0.0);
  for (int t = 0; t < draws; ++t) {
    const auto dir = sample_sparse_direction(dmu, k, rng);
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += dir.values[i];
      sum2[i] += dir.values[i] * dir.values[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / draws, m2 = sum2[i] / draws;
    const double se = std::sqrt(std::max(m2 - mean * mean, 0.0) / draws);
    CHECK(std::abs(mean - dmu[i]) <= 4.0 * se + 1e-15);
    CHECK(m2 <= 1.1 * (total / k + dmu[i] * dmu[i]));
  }
}

TEST_CASE("Lemma A.1 variance inequality on dependent pairs") {
  Rng rng(17);
  for (int family = 0; family < 10; ++family) {
    const double cx = 0.5 + family, cy = 2.0 / (1 + family);
    const int m = 10000;
    std::vector<double> xs(m), ys(m), prod(m);
    for (int t = 0; t < m; ++t) {
      const double z = rng.uniform();  // shared latent
      xs[t] = cx * std::clamp(std::sin(6.0 * z + family) + 0.3 * (rng.uniform() - 0.5), -1.0, 1.0);
      ys[t] = cy * std::clamp(z * z - 0.5 + 0.2 * (rng.uniform() - 0.5), -1.0, 1.0);
      prod[t] = xs[t] * ys[t];
    }
    auto var = [m](const std::vector<double>& v) {
      double mean = 0;
      for (double x : v) mean += x;
      mean /= m;
      double acc = 0;
      for (double x : v) acc += (x - mean) * (x - mean);
      return std::pair{acc / (m - 1), mean};
    };
    const auto [vxy, mxy] = var(prod);
    double fourth = 0;
    for (double p : prod) fourth += std::pow((p - mxy) * (p - mxy) - vxy, 2);
    const double se = std::sqrt(fourth / m / m);
    CHECK(vxy <= 2 * cx * cx * var(ys).first + 2 * cy * cy * var(xs).first + 5 * se);
  }
}

TEST_CASE("k = n step matches the closed form") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t d = 2 + seed % 4, n = 8 + seed;
    const auto st = make_setup(d, n, seed);
    Vector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = st.x[i] / st.s[i];
    ProjectionMaintainer mp(st.a, w, mp_opts());
    StepOptions so;
    so.k = static_cast<double>(n);
    Rng rng(seed);
    const StepResult r = stochastic_step(mp, st.x, st.s, st.dmu, so, rng);

    const Matrix p = testing::naive_projection(st.a, w);
    Vector u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = st.dmu[i] / std::sqrt(st.x[i] * st.s[i]);
    const Vector pu = testing::apply(p, u);
    Vector dx(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double root = std::sqrt(st.x[i] * st.s[i]);
      dx[i] = st.x[i] / root * (u[i] - pu[i]);
      ds[i] = st.s[i] / root * pu[i];
    }
    CHECK(testing::rel_diff(r.delta_x, dx) < 1e-8);
    CHECK(testing::rel_diff(r.delta_s, ds) < 1e-8);
    CHECK(r.direction.resample_count == 0);
  }
}

TEST_CASE("step identities after drift") {
  const std::size_t d = 4, n = 20;
  auto st = make_setup(d, n, 77, 2e-3);
  Vector w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = st.x[i] / st.s[i];
  ProjectionMaintainer mp(st.a, w, mp_opts());
  StepOptions so;
  so.k = 6.0;
  StochasticStepper stepper(n, so);
  Rng rng(5);
  const Matrix p_unit = testing::naive_projection(st.a, Vector(n, 1.0));
  const double a_scale = st.a.frobenius_norm();
  for (int it = 0; it < 100; ++it) {
    const auto& r = stepper.step(mp, st.x, st.s, st.dmu, rng);
    const auto vt = mp.vtilde();
    for (std::size_t i = 0; i < n; ++i) {
      const double xs = st.x[i] * st.s[i];
      CHECK(std::abs(r.xbar[i] * r.sbar[i] - xs) <= 1e-12 * xs);
      CHECK(std::abs(r.xbar[i] / r.sbar[i] - vt[i]) <= 1e-12 * vt[i]);
      CHECK(std::abs(r.delta_x[i] / r.xbar[i]) <= stepper.step_bound());
      CHECK(std::abs(r.delta_s[i] / r.sbar[i]) <= stepper.step_bound());
    }
    const Vector ad = mat_vec(st.a, r.delta_x);
    CHECK(norm_inf(ad) <= 1e-8 * a_scale * norm2(st.x));
    const Vector pds = testing::apply(p_unit, r.delta_s);
    Vector orth(n);
    for (std::size_t i = 0; i < n; ++i) orth[i] = r.delta_s[i] - pds[i];
    CHECK(norm2(orth) <= 1e-8 * norm2(r.delta_s));
    st.x = r.x_new;
    st.s = r.s_new;
    // Re-scale the direction to the new products.
    Rng drng(1000 + it);
    for (std::size_t i = 0; i < n; ++i)
      st.dmu[i] = 2e-3 * (drng.uniform() - 0.5) * st.x[i] * st.s[i];
  }
}

TEST_CASE("degenerate and failing steps") {
  const auto st = make_setup(3, 10, 8);
  Vector w(10);
  for (std::size_t i = 0; i < 10; ++i) w[i] = st.x[i] / st.s[i];

  SUBCASE("zero direction leaves the iterate") {
    ProjectionMaintainer mp(st.a, w, mp_opts());
    Rng rng(1);
    StepOptions so;
    so.k = 3;
    const auto r = stochastic_step(mp, st.x, st.s, Vector(10, 0.0), so, rng);
    CHECK(r.x_new == st.x);
    CHECK(r.s_new == st.s);
    CHECK(r.direction.degenerate);
  }
  SUBCASE("oversized direction is unbounded") {
    ProjectionMaintainer mp(st.a, w, mp_opts());
    Rng rng(1);
    StepOptions so;
    so.k = 3;
    so.max_resamples = 5;
    Vector big = st.dmu;
    for (std::size_t i = 0; i < 10; ++i) big[i] = 0.5 * st.x[i] * st.s[i];
    try {
      (void)stochastic_step(mp, st.x, st.s, big, so, rng);
      FAIL("expected step_unbounded");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::step_unbounded);
    }
  }
  SUBCASE("loose bound exposes positivity loss") {
    ProjectionMaintainer mp(st.a, w, mp_opts());
    Rng rng(1);
    StepOptions so;
    so.k = 10;
    so.step_bound = 100.0;
    Vector big(10);
    for (std::size_t i = 0; i < 10; ++i) big[i] = -3.0 * st.x[i] * st.s[i];
    try {
      (void)stochastic_step(mp, st.x, st.s, big, so, rng);
      FAIL("expected positivity_lost");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::positivity_lost);
    }
  }
}

TEST_CASE("k = n steps do not depend on the seed") {
  const auto st = make_setup(4, 12, 21);
  Vector w(12);
  for (std::size_t i = 0; i < 12; ++i) w[i] = st.x[i] / st.s[i];
  StepOptions so;
  so.k = 12;
  ProjectionMaintainer m1(st.a, w, mp_opts()), m2(st.a, w, mp_opts());
  Rng r1(1), r2(999);
  const auto a = stochastic_step(m1, st.x, st.s, st.dmu, so, r1);
  const auto b = stochastic_step(m2, st.x, st.s, st.dmu, so, r2);
  CHECK(a.x_new == b.x_new);
  CHECK(a.s_new == b.s_new);
}
