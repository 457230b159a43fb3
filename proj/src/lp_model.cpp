#include "stochlp/lp_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stochlp {

LinearProgram LinearProgram::make(Matrix A, Vector b, Vector c, double diameter,
                                  std::optional<double> lipschitz, std::string name) {
  if (b.size() != A.rows())
    throw Error(Errc::dimension_mismatch, "b has " + std::to_string(b.size()) +
                                              " entries but A has " + std::to_string(A.rows()) +
                                              " rows");
  if (c.size() != A.cols())
    throw Error(Errc::dimension_mismatch, "c has " + std::to_string(c.size()) +
                                              " entries but A has " + std::to_string(A.cols()) +
                                              " columns");
  if (A.rows() > A.cols())
    throw Error(Errc::dimension_mismatch, "more constraints than variables");
  for (double v : b)
    if (!std::isfinite(v)) throw Error(Errc::domain_error, "non-finite entry in b");
  for (double v : c)
    if (!std::isfinite(v)) throw Error(Errc::domain_error, "non-finite entry in c");
  if (!(diameter > 0.0) || !std::isfinite(diameter))
    throw Error(Errc::domain_error, "diameter bound R must be positive");
  const double cmax = norm_inf(c);
  double L = std::max(cmax, 1e-30);
  if (lipschitz) {
    if (!(*lipschitz > 0.0) || *lipschitz < cmax)
      throw Error(Errc::domain_error, "Lipschitz bound L must be at least max|c_i|");
    L = *lipschitz;
  }
  check_full_row_rank(A);
  return LinearProgram{std::move(A), std::move(b), std::move(c), diameter, L, std::move(name)};
}

double LinearProgram::objective(std::span<const double> x) const { return dot(c, x); }

ReformulatedLP reformulate(const LinearProgram& lp, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw Error(Errc::domain_error, "reformulate: delta must lie in (0, 1]");
  const std::size_t d = lp.num_constraints();
  const std::size_t n = lp.num_variables();
  const double R = lp.diameter;
  const double L = lp.lipschitz;

  Matrix abar(d + 1, n + 2);
  Vector bbar(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      abar(i, j) = lp.A(i, j);
      row_sum += lp.A(i, j);
    }
    abar(i, n + 1) = lp.b[i] / R - row_sum;
    bbar[i] = lp.b[i] / R;
  }
  // The two opposite sum rows of the textbook construction are merged into one.
  for (std::size_t j = 0; j <= n; ++j) abar(d, j) = 1.0;
  bbar[d] = static_cast<double>(n + 1);

  Vector cbar(n + 2, 0.0);
  for (std::size_t j = 0; j < n; ++j) cbar[j] = delta / L * lp.c[j];
  cbar[n + 1] = 1.0;

  ReformulatedLP out;
  out.delta = delta;
  out.original_n = n;
  out.original_d = d;
  out.x0.assign(n + 2, 1.0);
  out.y0.assign(d + 1, 0.0);
  out.y0[d] = -1.0;
  out.s0.resize(n + 2);
  for (std::size_t j = 0; j < n; ++j) out.s0[j] = 1.0 + cbar[j];
  out.s0[n] = 1.0;
  out.s0[n + 1] = 1.0;
  for (std::size_t j = 0; j < n; ++j)
    if (!(out.s0[j] > 0.0))
      throw Error(Errc::domain_error,
                  "reformulate: starting dual slack is not positive (delta = 1 with c_i = -L)",
                  static_cast<std::ptrdiff_t>(j));

  // The reformulated rows inherit full rank from A plus the independent sum row
  // (it is the only row touching τ).
  out.lp.A = std::move(abar);
  out.lp.b = std::move(bbar);
  out.lp.c = std::move(cbar);
  out.lp.diameter = R;
  out.lp.lipschitz = std::max(norm_inf(out.lp.c), 1e-30);
  out.lp.name = lp.name;
  return out;
}

Vector recover_solution(std::span<const double> xbar, const ReformulatedLP& refm,
                        const LinearProgram& lp) {
  const std::size_t n = refm.original_n;
  if (xbar.size() != n + 2)
    throw Error(Errc::dimension_mismatch, "recover_solution: expected " +
                                              std::to_string(n + 2) + " entries");
  Vector xhat(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (xbar[j] < -1e-12)
      throw Error(Errc::domain_error, "recover_solution: negative coordinate",
                  static_cast<std::ptrdiff_t>(j));
    xhat[j] = lp.diameter * std::max(xbar[j], 0.0);
  }
  return xhat;
}

double duality_gap(std::span<const double> x, std::span<const double> s) {
  if (x.size() != s.size()) throw Error(Errc::dimension_mismatch, "duality_gap: length mismatch");
  return dot(x, s);
}

double primal_infeasibility_l1(const LinearProgram& lp, std::span<const double> x) {
  Vector r = mat_vec(lp.A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lp.b[i];
  return norm1(r);
}

double infeasibility_bound(const LinearProgram& lp, double delta) {
  return 2.0 * delta * (lp.diameter * norm1(lp.A.data()) + norm1(lp.b));
}

}  // namespace stochlp
