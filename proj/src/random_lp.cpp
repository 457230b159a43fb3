#include "stochlp/random_lp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "stochlp/stochastic_step.hpp"

namespace stochlp {

namespace {

// Box–Muller on the portable uniform stream.
double standard_normal(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace

LinearProgram random_feasible_lp(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d == 0 || d > n) throw Error(Errc::domain_error, "random_feasible_lp: need 0 < d <= n");
  Rng rng(seed);
  Matrix a(d, n);
  for (std::size_t j = 0; j < n; ++j) a(0, j) = 1.0 + rng.uniform();
  for (std::size_t i = 1; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = standard_normal(rng);
  Vector x0(n);
  for (auto& v : x0) v = 0.5 + rng.uniform();
  Vector c(n);
  for (auto& v : c) v = standard_normal(rng);
  Vector b = mat_vec(a, x0);
  const double r = 2.0 * norm1(x0);
  return LinearProgram::make(std::move(a), std::move(b), std::move(c), r, std::nullopt,
                             "random-" + std::to_string(d) + "x" + std::to_string(n) + "-" +
                                 std::to_string(seed));
}

std::vector<LinearProgram> random_suite(std::size_t count, std::uint64_t seed,
                                        const SuiteShape& shape, const EnumerationLimits& limits) {
  Rng rng(seed);
  std::vector<LinearProgram> out;
  out.reserve(count);
  std::uint64_t instance_seed = seed * 1000003ULL + 17;
  while (out.size() < count) {
    const std::size_t d =
        shape.d_min + static_cast<std::size_t>(rng.uniform() * static_cast<double>(shape.d_max - shape.d_min + 1));
    const std::size_t n_lo = std::max(shape.n_min, d + 1);
    if (n_lo > shape.n_max) continue;
    const std::size_t n =
        n_lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(shape.n_max - n_lo + 1));
    ++instance_seed;
    if (!enumeration_feasible(d, n, limits)) continue;
    out.push_back(random_feasible_lp(d, n, instance_seed));
  }
  return out;
}

}  // namespace stochlp
