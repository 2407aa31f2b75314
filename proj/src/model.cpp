#include "nlftl/model.hpp"

#include <algorithm>
#include <numbers>

namespace nlftl {

double Mobility::speed(double rho) const {
  if (!(rho >= 0.0)) throw DomainError("mobility evaluated at negative density");
  return std::max(0.0, v_max * (1.0 - rho / max_density));
}

double Mobility::speed_derivative(double rho) const {
  if (!(rho >= 0.0)) throw DomainError("mobility evaluated at negative density");
  return rho <= max_density ? -v_max / max_density : 0.0;
}

double Mobility::flux_derivative(double rho) const {
  if (!(rho >= 0.0)) throw DomainError("mobility evaluated at negative density");
  if (rho > max_density) return 0.0;
  return v_max * (1.0 - 2.0 * rho / max_density);
}

double Kernel::eval(double x, int order) const {
  switch (order) {
    case 0: return value(x);
    case 1: return d1(x);
    case 2: return d2(x);
    default: throw DomainError("kernel derivative order must be 0, 1 or 2");
  }
}

double Kernel::lipschitz_bound(double a, double b) const {
  if (a > b) std::swap(a, b);
  // |K''| is maximal at an endpoint or at a root of K''' (x = 0, x^2 = 3/(2B)).
  double best = std::max(std::abs(d2(a)), std::abs(d2(b)));
  const double r = std::sqrt(1.5 / inverse_width);
  for (double c : {0.0, -r, r})
    if (c >= a && c <= b) best = std::max(best, std::abs(d2(c)));
  return best;
}

Kernel standard_gaussian() {
  return Kernel{KernelKind::gaussian, 1.0 / std::sqrt(2.0 * std::numbers::pi), 0.5};
}

DensityProfile::DensityProfile(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1)
    throw DomainError("profile needs n >= 1 cells and n + 1 breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]))
      throw DomainError("profile breakpoints must be strictly increasing");
  for (double r : values_)
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("profile values must be finite and >= 0");

  cumulative_.resize(breakpoints_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    cumulative_[i + 1] = cumulative_[i] + values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
}

DensityProfile DensityProfile::uniform(double left, double right, double value) {
  return DensityProfile({left, right}, {value});
}

DensityProfile DensityProfile::vacuum(double left, double right) {
  return DensityProfile({left, right}, {0.0});
}

double DensityProfile::support_left() const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] > 0.0) return breakpoints_[i];
  return left();
}

double DensityProfile::support_right() const {
  for (std::size_t i = values_.size(); i-- > 0;)
    if (values_[i] > 0.0) return breakpoints_[i + 1];
  return right();
}

double DensityProfile::value_at(double x) const {
  if (x < left() || x >= right()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double DensityProfile::cdf(double x) const {
  if (x <= left()) return 0.0;
  if (x >= right()) return total_mass();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return cumulative_[k] + values_[k] * (x - breakpoints_[k]);
}

double DensityProfile::cdf_inverse(double target) const {
  const double mass = total_mass();
  if (!(target >= 0.0) || target > mass)
    throw DomainError("cdf_inverse target outside [0, total mass]");
  if (target == 0.0) return support_left();
  // The first breakpoint whose cumulative mass reaches the target closes the
  // cell in which the cdf first attains it; that cell has positive density.
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto p = static_cast<std::size_t>(it - cumulative_.begin());
  const std::size_t k = p - 1;
  const double x = breakpoints_[k] + (target - cumulative_[k]) / values_[k];
  return std::min(x, breakpoints_[p]);
}

AtomicMeasure::AtomicMeasure(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.size() != weights_.size()) throw DomainError("atoms and weights differ in length");
  for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
    if (!(atoms_[i] < atoms_[i + 1])) throw DomainError("atoms must be strictly increasing");
  for (double w : weights_)
    if (!(w > 0.0)) throw DomainError("atom weights must be positive");
}

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

}  // namespace nlftl
