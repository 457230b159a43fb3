#include "stochlp/reference_oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stochlp/potential.hpp"
#include "stochlp/solver.hpp"

namespace stochlp {

std::string_view to_string(OracleStatus status) noexcept {
  switch (status) {
    case OracleStatus::optimal: return "optimal";
    case OracleStatus::infeasible: return "infeasible";
    case OracleStatus::unbounded_flagged: return "unbounded_flagged";
  }
  return "unknown";
}

std::uint64_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (acc > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    acc = acc * num / i;
  }
  return acc;
}

bool enumeration_feasible(std::size_t d, std::size_t n, const EnumerationLimits& limits) {
  return n <= limits.max_n && binomial(n, d) <= limits.max_bases;
}

namespace {

// Lexicographic unranking of a d-combination of {0..n-1}.
void unrank_combination(std::uint64_t rank, std::size_t n, std::size_t d,
                        std::vector<std::size_t>& out) {
  out.resize(d);
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < d; ++pos) {
    for (std::size_t v = next;; ++v) {
      const std::uint64_t count = binomial(n - v - 1, d - pos - 1);
      if (rank < count) {
        out[pos] = v;
        next = v + 1;
        break;
      }
      rank -= count;
    }
  }
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t d = comb.size();
  for (std::size_t pos = d; pos-- > 0;) {
    if (comb[pos] < n - d + pos) {
      ++comb[pos];
      for (std::size_t q = pos + 1; q < d; ++q) comb[q] = comb[q - 1] + 1;
      return true;
    }
  }
  return false;
}

struct BasisBest {
  double objective = std::numeric_limits<double>::infinity();
  std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t examined = 0;
  std::uint64_t feasible = 0;
};

// Evaluates one basis; returns true and fills xb when it is a feasible vertex.
bool evaluate_basis(const LinearProgram& lp, const std::vector<std::size_t>& cols, Matrix& basis,
                    Vector& xb) {
  const std::size_t d = lp.num_constraints();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t p = 0; p < d; ++p) basis(i, p) = lp.A(i, cols[p]);
  const auto lu = LuFactor::factor(basis, 1e-14);
  if (!lu || lu->relative_determinant() <= 1e-12) return false;
  xb.assign(lp.b.begin(), lp.b.end());
  lu->solve_in_place(xb);
  for (double v : xb)
    if (!(v >= -1e-10)) return false;
  return true;
}

void scan_range(const LinearProgram& lp, std::uint64_t begin, std::uint64_t end, BasisBest& best) {
  const std::size_t d = lp.num_constraints(), n = lp.num_variables();
  std::vector<std::size_t> cols;
  unrank_combination(begin, n, d, cols);
  Matrix basis(d, d);
  Vector xb;
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    ++best.examined;
    if (evaluate_basis(lp, cols, basis, xb)) {
      ++best.feasible;
      double obj = 0.0;
      for (std::size_t p = 0; p < d; ++p) obj += lp.c[cols[p]] * std::max(xb[p], 0.0);
      if (obj < best.objective) {
        best.objective = obj;
        best.rank = rank;
      }
    }
    if (rank + 1 < end) next_combination(cols, n);
  }
}

}  // namespace

OracleResult vertex_enumerate_solve(const LinearProgram& lp, Kernels kernels,
                                    const EnumerationLimits& limits) {
  const std::size_t d = lp.num_constraints(), n = lp.num_variables();
  if (!enumeration_feasible(d, n, limits))
    throw Error(Errc::oracle_refused,
                "vertex enumeration refused: n = " + std::to_string(n) + ", C(n,d) = " +
                    std::to_string(binomial(n, d)));
  const std::uint64_t total = binomial(n, d);

  BasisBest best;
  if (kernels == Kernels::parallel && total > 4096) {
    const int threads = omp_get_max_threads();
    const std::uint64_t chunks = static_cast<std::uint64_t>(threads) * 8;
    std::vector<BasisBest> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      const auto cu = static_cast<std::uint64_t>(c);
      const std::uint64_t lo = total * cu / chunks, hi = total * (cu + 1) / chunks;
      if (lo < hi) scan_range(lp, lo, hi, partial[cu]);
    }
    // Fixed-order reduction; ties resolved by rank.
    for (const auto& p : partial) {
      best.examined += p.examined;
      best.feasible += p.feasible;
      if (p.objective < best.objective ||
          (p.objective == best.objective && p.rank < best.rank)) {
        best.objective = p.objective;
        best.rank = p.rank;
      }
    }
  } else if (total > 0) {
    scan_range(lp, 0, total, best);
  }

  OracleResult out;
  out.bases_examined = best.examined;
  out.feasible_bases = best.feasible;
  if (best.rank == std::numeric_limits<std::uint64_t>::max()) {
    out.status = OracleStatus::infeasible;
    out.optimum = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  std::vector<std::size_t> cols;
  unrank_combination(best.rank, n, d, cols);
  Matrix basis(d, d);
  Vector xb;
  evaluate_basis(lp, cols, basis, xb);
  out.argmin.assign(n, 0.0);
  for (std::size_t p = 0; p < d; ++p) out.argmin[cols[p]] = std::max(xb[p], 0.0);
  out.optimum = lp.objective(out.argmin);
  out.status = OracleStatus::optimal;

  // An improving edge with no blocking basic variable marks a ray.
  const auto lu = LuFactor::factor(basis, 1e-14);
  std::vector<bool> in_basis(n, false);
  for (std::size_t j : cols) in_basis[j] = true;
  Vector dir(d);
  for (std::size_t j = 0; j < n && lu; ++j) {
    if (in_basis[j]) continue;
    for (std::size_t i = 0; i < d; ++i) dir[i] = lp.A(i, j);
    lu->solve_in_place(dir);
    double reduced = lp.c[j];
    bool blocked = false;
    for (std::size_t p = 0; p < d; ++p) {
      reduced -= lp.c[cols[p]] * dir[p];
      if (dir[p] > 1e-12) blocked = true;
    }
    if (!blocked && reduced < -1e-9) {
      out.status = OracleStatus::unbounded_flagged;
      break;
    }
  }
  return out;
}

Vector naive_projection_apply(const Matrix& a, std::span<const double> w,
                              std::span<const double> h) {
  const std::size_t n = a.cols();
  if (w.size() != n || h.size() != n)
    throw Error(Errc::dimension_mismatch, "naive projection: length mismatch");
  Vector u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = std::sqrt(w[j]) * h[j];
  const Vector au = mat_vec(a, u);
  const Matrix g = form_gram(a, w);
  const Matrix y = solve_spd(g, Matrix(au.size(), 1, au));
  Vector out = mat_tvec(a, y.data());
  for (std::size_t j = 0; j < n; ++j) out[j] *= std::sqrt(w[j]);
  return out;
}

OracleResult reference_ipm(const LinearProgram& lp, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw Error(Errc::domain_error, "reference_ipm: delta must lie in (0, 1]");
  const double inner_delta = delta / 2.0;
  const ReformulatedLP refm = reformulate(lp, inner_delta);
  const Matrix& a = refm.lp.A;
  const std::size_t n = a.cols();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double t_stop = inner_delta * inner_delta / (2.0 * static_cast<double>(n));

  Vector x = refm.x0, s = refm.s0, w(n), u(n);
  double t = 1.0;
  std::size_t iters = 0;
  while (t > t_stop) {
    const double t_new = t * (1.0 - 1.0 / (4.0 * sqrt_n));
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = x[i] * s[i];
      w[i] = x[i] / s[i];
      u[i] = (t_new - mu) / std::sqrt(mu);
    }
    const Matrix p = projection_full(a, w);
    const Vector pu = mat_vec(p, u);
    double alpha = 1.0;
    Vector dx(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double sw = std::sqrt(w[i]);
      dx[i] = sw * (u[i] - pu[i]);
      ds[i] = pu[i] / sw;
      if (dx[i] < 0.0) alpha = std::min(alpha, -0.9 * x[i] / dx[i]);
      if (ds[i] < 0.0) alpha = std::min(alpha, -0.9 * s[i] / ds[i]);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * dx[i];
      s[i] += alpha * ds[i];
      worst = std::max(worst, std::abs(x[i] * s[i] / t_new - 1.0));
    }
    if (worst > 0.1) {
      auto cs = classical_step(x, s, t_new, a, 1e-2 * t_new);
      x = std::move(cs.x);
      s = std::move(cs.s);
    }
    t = t_new;
    ++iters;
  }

  OracleResult out;
  out.argmin = recover_solution(x, refm, lp);
  out.optimum = lp.objective(out.argmin);
  out.status = OracleStatus::optimal;
  out.iterations = iters;
  out.t_final = t;
  out.final_gap = duality_gap(x, s);
  out.primal_infeas_l1 = primal_infeasibility_l1(lp, out.argmin);
  return out;
}

}  // namespace stochlp
