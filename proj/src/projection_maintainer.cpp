#include "stochlp/projection_maintainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace stochlp {

namespace {

inline bool in_band(double w, double v, double eps) {
  return (1.0 - eps) * v <= w && w <= (1.0 + eps) * v;
}

void check_weights(std::span<const double> w, std::size_t n, const char* who) {
  if (w.size() != n)
    throw Error(Errc::dimension_mismatch, std::string(who) + ": weight length mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw Error(Errc::domain_error, std::string(who) + ": weights must be positive",
                  static_cast<std::ptrdiff_t>(i));
}

}  // namespace

ProjectionMaintainer::ProjectionMaintainer(Matrix a, std::span<const double> w,
                                           const MaintainerOptions& options)
    : a_(std::move(a)),
      n_(a_.cols()),
      options_(options),
      schedule_(std::max<std::size_t>(a_.cols(), 1), options.a, options.omega),
      budget_(std::pow(static_cast<double>(a_.cols()), options.a)),
      log_n_(clamped_log(a_.cols())) {
  if (!(options.eps_mp > 0.0 && options.eps_mp < 0.25))
    throw Error(Errc::domain_error, "maintainer: eps_mp must lie in (0, 1/4)");
  check_weights(w, n_, "maintainer");
  check_full_row_rank(a_);
  y_.resize(n_);
  u_.resize(n_);
  z_.resize(n_);
  order_.resize(n_);
  nonzero_.reserve(n_);
  reinitialize(w);
  counters_ = MaintainerCounters{};
  counters_.initializations = 1;
}

void ProjectionMaintainer::reinitialize(std::span<const double> w) {
  check_weights(w, n_, "maintainer");
  w_.assign(w.begin(), w.end());
  v_ = w_;
  vtilde_ = w_;
  sqrt_vtilde_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) sqrt_vtilde_[i] = std::sqrt(vtilde_[i]);
  m_ = inverse_gram_sandwich(a_, v_, options_.kernels);
  rank_updates_since_refresh_ = 0;
  tilde_support_.clear();
  tilde_lu_.reset();
  tilde_singular_ = false;
  ++counters_.initializations;
}

void ProjectionMaintainer::rebuild_from_v() {
  m_ = inverse_gram_sandwich(a_, v_, options_.kernels);
  rank_updates_since_refresh_ = 0;
}

bool ProjectionMaintainer::apply_woodbury(std::span<const std::size_t> batch,
                                          std::span<const double> w_new) {
  const std::size_t r = batch.size();
  // K = Δ_SS⁻¹ + M_SS
  Matrix k(r, r);
  for (std::size_t p = 0; p < r; ++p) {
    for (std::size_t q = 0; q < r; ++q) k(p, q) = m_(batch[p], batch[q]);
    k(p, p) += 1.0 / (w_new[batch[p]] - v_[batch[p]]);
  }
  const auto lu = LuFactor::factor(k);
  if (!lu) return false;

  // Z = K⁻¹ M_Sᵀ (r×n); rows of M stand in for columns by symmetry.
  Matrix z(r, n_);
  small_.resize(r);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t p = 0; p < r; ++p) small_[p] = m_(batch[p], j);
    lu->solve_in_place(small_);
    for (std::size_t p = 0; p < r; ++p) z(p, j) = small_[p];
  }
  Matrix ms(n_, r);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t p = 0; p < r; ++p) ms(i, p) = m_(i, batch[p]);

  // M ← M − M_S Z, lower triangle then mirror.
  for (std::size_t i = 0; i < n_; ++i) {
    auto mi = m_.row(i);
    for (std::size_t p = 0; p < r; ++p) {
      const double coef = ms(i, p);
      if (coef == 0.0) continue;
      const auto zp = z.row(p);
      for (std::size_t j = 0; j <= i; ++j) mi[j] -= coef * zp[j];
    }
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) m_(i, j) = m_(j, i);
  return true;
}

std::span<const double> ProjectionMaintainer::update(std::span<const double> w_new) {
  check_weights(w_new, n_, "maintainer update");
  const double eps = options_.eps_mp;
  ++counters_.updates;

  std::size_t r = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    y_[i] = w_new[i] / v_[i] - 1.0;
    if (std::abs(y_[i]) >= eps || !in_band(w_new[i], v_[i], eps)) ++r;
  }

  counters_.last_rank = 0;
  if (static_cast<double>(r) >= budget_ && r > 0) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [this](std::size_t p, std::size_t q) {
      return std::abs(y_[p]) > std::abs(y_[q]);
    });
    // 1-based π(r) is order_[r-1].
    const double shrink = 1.0 - 1.0 / log_n_;
    while (1.5 * static_cast<double>(r) < static_cast<double>(n_)) {
      const auto next = static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(r)));
      if (!(std::abs(y_[order_[next - 1]]) >= shrink * std::abs(y_[order_[r - 1]]))) break;
      r = std::min(next, n_);
    }
    std::span<const std::size_t> batch(order_.data(), r);
    if (apply_woodbury(batch, w_new)) {
      for (std::size_t i : batch) v_[i] = w_new[i];
      ++rank_updates_since_refresh_;
      if (options_.refresh_every > 0 && rank_updates_since_refresh_ >= options_.refresh_every) {
        rebuild_from_v();
        ++counters_.refreshes;
      }
    } else {
      v_.assign(w_new.begin(), w_new.end());
      rebuild_from_v();
      ++counters_.rebuild_fallbacks;
    }
    ++counters_.rank_updates;
    counters_.total_rank += r;
    counters_.weighted_cost += static_cast<double>(r) * schedule_.weight(r);
    counters_.last_rank = r;
  }

  w_.assign(w_new.begin(), w_new.end());
  tilde_support_.clear();
  for (std::size_t i = 0; i < n_; ++i) {
    if (in_band(w_[i], v_[i], eps)) {
      vtilde_[i] = v_[i];
    } else {
      vtilde_[i] = w_[i];
      tilde_support_.push_back(i);
    }
    sqrt_vtilde_[i] = std::sqrt(vtilde_[i]);
  }
  counters_.max_tilde_support = std::max(counters_.max_tilde_support, tilde_support_.size());
  refresh_query_correction();
  return vtilde_;
}

void ProjectionMaintainer::refresh_query_correction() {
  tilde_lu_.reset();
  tilde_singular_ = false;
  const std::size_t s = tilde_support_.size();
  if (s == 0) return;
  Matrix k(s, s);
  for (std::size_t p = 0; p < s; ++p) {
    const std::size_t i = tilde_support_[p];
    for (std::size_t q = 0; q < s; ++q) k(p, q) = m_(i, tilde_support_[q]);
    k(p, p) += 1.0 / (vtilde_[i] - v_[i]);
  }
  tilde_lu_ = LuFactor::factor(k);
  tilde_singular_ = !tilde_lu_.has_value();
}

void ProjectionMaintainer::query(std::span<const double> h, std::span<double> out) {
  if (h.size() != n_ || out.size() != n_)
    throw Error(Errc::dimension_mismatch, "maintainer query: length mismatch");
  ++counters_.queries;

  if (tilde_singular_) {
    ++counters_.query_fallbacks;
    // Fresh (A Ṽ Aᵀ) solve at the reported weights.
    for (std::size_t j = 0; j < n_; ++j) u_[j] = sqrt_vtilde_[j] * h[j];
    const Vector au = mat_vec(a_, u_);
    Matrix rhs(au.size(), 1, au);
    const Matrix g = form_gram(a_, vtilde_);
    const Matrix sol = solve_spd(g, rhs);
    const Vector back = mat_tvec(a_, sol.data());
    for (std::size_t i = 0; i < n_; ++i) out[i] = sqrt_vtilde_[i] * back[i];
    return;
  }

  nonzero_.clear();
  for (std::size_t j = 0; j < n_; ++j) {
    u_[j] = sqrt_vtilde_[j] * h[j];
    if (h[j] != 0.0) nonzero_.push_back(j);
  }
  std::fill(z_.begin(), z_.end(), 0.0);
  for (std::size_t j : nonzero_) {
    const double uj = u_[j];
    const auto mj = m_.row(j);
    for (std::size_t i = 0; i < n_; ++i) z_[i] += mj[i] * uj;
  }

  if (tilde_lu_) {
    const std::size_t s = tilde_support_.size();
    small_.resize(s);
    for (std::size_t p = 0; p < s; ++p) small_[p] = z_[tilde_support_[p]];
    tilde_lu_->solve_in_place(small_);
    for (std::size_t p = 0; p < s; ++p) {
      const double cp = small_[p];
      const auto mp = m_.row(tilde_support_[p]);
      for (std::size_t i = 0; i < n_; ++i) z_[i] -= mp[i] * cp;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) out[i] = sqrt_vtilde_[i] * z_[i];
}

Vector ProjectionMaintainer::query(std::span<const double> h) {
  Vector out(n_);
  query(h, out);
  return out;
}

std::vector<std::pair<std::string, double>> ProjectionMaintainer::counter_rows() const {
  const auto& c = counters_;
  return {
      {"updates", static_cast<double>(c.updates)},
      {"rank_updates", static_cast<double>(c.rank_updates)},
      {"total_rank", static_cast<double>(c.total_rank)},
      {"weighted_cost", c.weighted_cost},
      {"queries", static_cast<double>(c.queries)},
      {"query_fallbacks", static_cast<double>(c.query_fallbacks)},
      {"rebuild_fallback", static_cast<double>(c.rebuild_fallbacks)},
      {"refreshes", static_cast<double>(c.refreshes)},
      {"initializations", static_cast<double>(c.initializations)},
      {"max_tilde_support", static_cast<double>(c.max_tilde_support)},
  };
}

}  // namespace stochlp
