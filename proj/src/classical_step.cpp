#include <algorithm>
#include <cmath>
#include <string>

#include "stochlp/potential.hpp"
#include "stochlp/solver.hpp"

namespace stochlp {

ClassicalStepResult classical_step(std::span<const double> x, std::span<const double> s,
                                   double t_new, const Matrix& a, double eps_target,
                                   Kernels kernels) {
  const std::size_t n = x.size();
  if (s.size() != n || a.cols() != n)
    throw Error(Errc::dimension_mismatch, "classical step: length mismatch");
  if (!(t_new > 0.0)) throw Error(Errc::domain_error, "classical step: t must be positive");

  const auto cap = static_cast<std::size_t>(
      64.0 * std::ceil(std::sqrt(static_cast<double>(n)) * clamped_log(n)));

  ClassicalStepResult out;
  out.x.assign(x.begin(), x.end());
  out.s.assign(s.begin(), s.end());
  Vector w(n), u(n), dmu(n);

  for (std::size_t it = 0;; ++it) {
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = out.x[i] * out.s[i];
      res += (mu - t_new) * (mu - t_new);
      dmu[i] = std::clamp(t_new - mu, -0.1 * mu, 0.1 * mu);
    }
    out.residual = std::sqrt(res);
    out.inner_iterations = it;
    if (out.residual <= eps_target) return out;
    if (it >= cap)
      throw Error(Errc::centering_failed,
                  "classical step: residual " + std::to_string(out.residual) + " after " +
                      std::to_string(it) + " inner iterations");

    for (std::size_t i = 0; i < n; ++i) {
      w[i] = out.x[i] / out.s[i];
      u[i] = dmu[i] / std::sqrt(out.x[i] * out.s[i]);
    }
    const Matrix p = projection_full(a, w, kernels);
    const Vector pu = mat_vec(p, u, kernels);

    // δ_x = √(x/s)(I − P)u, δ_s = √(s/x)Pu; damped to stay interior.
    double alpha = 1.0;
    Vector dx(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double sw = std::sqrt(w[i]);
      dx[i] = sw * (u[i] - pu[i]);
      ds[i] = pu[i] / sw;
      if (dx[i] < 0.0) alpha = std::min(alpha, -0.9 * out.x[i] / dx[i]);
      if (ds[i] < 0.0) alpha = std::min(alpha, -0.9 * out.s[i] / ds[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * dx[i];
      out.s[i] += alpha * ds[i];
    }
  }
}

Vector recover_dual(const Matrix& a, std::span<const double> c, std::span<const double> s) {
  Vector rhs(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) rhs[i] = c[i] - s[i];
  const Vector ar = mat_vec(a, rhs);
  Vector ones(a.cols(), 1.0);
  const Matrix g = form_gram(a, ones);
  const Matrix y = solve_spd(g, Matrix(ar.size(), 1, ar));
  return Vector(y.data().begin(), y.data().end());
}

}  // namespace stochlp
