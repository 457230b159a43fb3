#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochlp/dense_linalg.hpp"
#include "stochlp/potential.hpp"

namespace stochlp {

struct MaintainerOptions {
  double eps_mp = 0.025;
  double a = 1.0 / 3.0;
  /// Matrix-multiplication exponent; only shapes the g weights in the counters.
  double omega = 2.373;
  /// Recompute M from scratch after this many batched rank updates; 0 disables.
  std::size_t refresh_every = 50;
  Kernels kernels = Kernels::sequential;
};

struct MaintainerCounters {
  std::uint64_t updates = 0;
  std::uint64_t rank_updates = 0;      // updates that changed v
  std::uint64_t total_rank = 0;        // Σ r_k
  double weighted_cost = 0.0;          // Σ r_k · g_{r_k}
  std::uint64_t queries = 0;
  std::uint64_t query_fallbacks = 0;
  std::uint64_t rebuild_fallbacks = 0;
  std::uint64_t refreshes = 0;
  std::uint64_t initializations = 0;
  std::size_t last_rank = 0;
  std::size_t max_tilde_support = 0;
};

/// Maintains M = Aᵀ(A V Aᵀ)⁻¹A for slowly drifting positive weights and
/// answers projection-vector products at weights ṽ with w ≈_{ε_mp} ṽ.
///
/// v changes only in batches of at least n^a coordinates, applied to M as a
/// rank-r Woodbury correction. Coordinates that have drifted past ε_mp but are
/// not yet batched are corrected on the fly inside query().
///
/// Not reentrant: update() and query() both touch internal scratch space and
/// counters, so one instance must not be used from two threads at once.
class ProjectionMaintainer {
 public:
  ProjectionMaintainer(Matrix a, std::span<const double> w, const MaintainerOptions& options);

  /// Restart at weights w, keeping the counters (v = ṽ = w, fresh M).
  void reinitialize(std::span<const double> w);

  /// Moves the target weights to w_new and returns the reported ṽ.
  std::span<const double> update(std::span<const double> w_new);

  /// out = √Ṽ Aᵀ(AṼAᵀ)⁻¹A√Ṽ h for the ṽ of the last update. Zero entries of h
  /// are skipped.
  void query(std::span<const double> h, std::span<double> out);
  Vector query(std::span<const double> h);

  std::size_t dim() const noexcept { return n_; }
  const Matrix& constraint_matrix() const noexcept { return a_; }
  std::span<const double> w() const noexcept { return w_; }
  std::span<const double> v() const noexcept { return v_; }
  std::span<const double> vtilde() const noexcept { return vtilde_; }
  const Matrix& M() const noexcept { return m_; }
  double eps_mp() const noexcept { return options_.eps_mp; }
  double a() const noexcept { return options_.a; }
  /// n^a: a batch of fewer coordinates than this is deferred.
  double budget() const noexcept { return budget_; }
  /// Indices where w has left the (1 ± ε_mp) band around v.
  std::span<const std::size_t> tilde_support() const noexcept { return tilde_support_; }
  const MaintainerCounters& counters() const noexcept { return counters_; }
  std::vector<std::pair<std::string, double>> counter_rows() const;

 private:
  void rebuild_from_v();
  void refresh_query_correction();
  bool apply_woodbury(std::span<const std::size_t> batch, std::span<const double> w_new);

  Matrix a_;
  std::size_t n_;
  MaintainerOptions options_;
  WeightSchedule schedule_;
  double budget_;
  double log_n_;

  Vector w_, v_, vtilde_, sqrt_vtilde_;
  Matrix m_;
  MaintainerCounters counters_;
  std::size_t rank_updates_since_refresh_ = 0;

  // Deferred correction for the current ṽ.
  std::vector<std::size_t> tilde_support_;
  std::optional<LuFactor> tilde_lu_;
  bool tilde_singular_ = false;

  // Scratch.
  Vector y_, u_, z_, small_;
  std::vector<std::size_t> order_, nonzero_;
};

}  // namespace stochlp
