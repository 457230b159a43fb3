#include "stochlp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace stochlp {

double clamped_log(std::size_t n) noexcept {
  return std::log(static_cast<double>(std::max<std::size_t>(n, 3)));
}

CoshPotential::CoshPotential(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(Errc::domain_error, "cosh potential: lambda must be positive and finite");
}

namespace {

inline double guarded_argument(double lambda, double r, std::size_t i) {
  const double arg = lambda * r;
  if (!(std::abs(arg) <= CoshPotential::kOverflowArgument))
    throw Error(Errc::potential_overflow,
                "cosh potential diverged at coordinate " + std::to_string(i),
                static_cast<std::ptrdiff_t>(i));
  return arg;
}

}  // namespace

double CoshPotential::value(std::span<const double> r) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) acc += std::cosh(guarded_argument(lambda_, r[i], i));
  return acc;
}

void CoshPotential::gradient(std::span<const double> r, std::span<double> out) const {
  for (std::size_t i = 0; i < r.size(); ++i)
    out[i] = lambda_ * std::sinh(guarded_argument(lambda_, r[i], i));
}

Vector CoshPotential::gradient(std::span<const double> r) const {
  Vector g(r.size());
  gradient(r, g);
  return g;
}

double CoshPotential::value_and_gradient(std::span<const double> r,
                                         std::span<double> grad) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double e = std::exp(guarded_argument(lambda_, r[i], i));
    const double inv = 1.0 / e;
    acc += 0.5 * (e + inv);
    grad[i] = lambda_ * 0.5 * (e - inv);
  }
  return acc;
}

double CoshPotential::hessian_norm_sq(std::span<const double> r,
                                      std::span<const double> v) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    acc += lambda_ * lambda_ * std::cosh(guarded_argument(lambda_, r[i], i)) * v[i] * v[i];
  return acc;
}

SoftErrorPotential::SoftErrorPotential(double eps_mp) : eps_(eps_mp) {
  if (!(eps_mp > 0.0 && eps_mp < 0.25))
    throw Error(Errc::domain_error, "soft error potential: eps_mp must lie in (0, 1/4)");
}

double SoftErrorPotential::value(double x) const noexcept {
  const double ax = std::abs(x);
  if (ax <= eps_) return ax * ax / (2.0 * eps_);
  if (ax <= 2.0 * eps_) {
    const double gap = 2.0 * eps_ - ax;
    return eps_ - gap * gap / (2.0 * eps_);
  }
  return eps_;
}

double SoftErrorPotential::derivative(double x) const noexcept {
  const double ax = std::abs(x);
  double mag = 0.0;
  if (ax <= eps_)
    mag = ax / eps_;
  else if (ax <= 2.0 * eps_)
    mag = (2.0 * eps_ - ax) / eps_;
  return x < 0.0 ? -mag : mag;
}

double SoftErrorPotential::second_derivative(double x) const noexcept {
  const double ax = std::abs(x);
  if (ax <= eps_) return 1.0 / eps_;
  if (ax <= 2.0 * eps_) return -1.0 / eps_;
  return 0.0;
}

WeightSchedule::WeightSchedule(std::size_t n, double a, double omega)
    : n_(n), a_(a), omega_(omega) {
  if (n == 0) throw Error(Errc::domain_error, "weight schedule: n must be positive");
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::domain_error, "weight schedule: a must lie in (0,1)");
  if (!(omega >= 2.0 && omega <= 3.0))
    throw Error(Errc::domain_error, "weight schedule: omega must lie in [2,3]");
  const double nd = static_cast<double>(n);
  threshold_ = std::pow(nd, a);
  flat_ = std::pow(nd, -a);
  exponent_ = (omega - 2.0) / (1.0 - a) - 1.0;
  scale_ = std::pow(nd, -a * (omega - 2.0) / (1.0 - a));
}

double WeightSchedule::weight(std::size_t i) const {
  if (i < 1 || i > n_) throw Error(Errc::domain_error, "weight schedule: rank out of range");
  const double id = static_cast<double>(i);
  if (id < threshold_) return flat_;
  // Equal to flat_ at i = n^a in exact arithmetic; the min keeps g monotone.
  return std::min(flat_, std::pow(id, exponent_) * scale_);
}

double maintenance_potential(const WeightSchedule& g, const SoftErrorPotential& psi,
                             std::span<const double> errors) {
  Vector mags(errors.size());
  std::transform(errors.begin(), errors.end(), mags.begin(), [](double e) { return std::abs(e); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) acc += g.weight(i + 1) * psi.value(mags[i]);
  return acc;
}

}  // namespace stochlp
