#include "nlftl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nlftl {

namespace {

// CDF given by knots with left and right limits, linear between knots.
struct PiecewiseCdf {
  std::vector<double> knots;
  std::vector<double> below;  // F(knot-)
  std::vector<double> above;  // F(knot+)

  double mass() const { return above.empty() ? 0.0 : above.back(); }

  // Value just right of x (x may be a knot).
  double right_limit(double x) const {
    if (knots.empty() || x < knots.front()) return 0.0;
    if (x >= knots.back()) return mass();
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const auto k = static_cast<std::size_t>(it - knots.begin()) - 1;
    if (x == knots[k]) return above[k];
    const double w = (x - knots[k]) / (knots[k + 1] - knots[k]);
    return above[k] + w * (below[k + 1] - above[k]);
  }

  // Value just left of x.
  double left_limit(double x) const {
    if (knots.empty() || x <= knots.front()) return 0.0;
    if (x > knots.back()) return mass();
    const auto it = std::lower_bound(knots.begin(), knots.end(), x);
    const auto k = static_cast<std::size_t>(it - knots.begin());
    if (x == knots[k]) return below[k];
    const double w = (x - knots[k - 1]) / (knots[k] - knots[k - 1]);
    return above[k - 1] + w * (below[k] - above[k - 1]);
  }
};

PiecewiseCdf cdf_of(const DensityProfile& p) {
  PiecewiseCdf c;
  const auto b = p.breakpoints();
  const auto r = p.values();
  c.knots.assign(b.begin(), b.end());
  c.below.resize(b.size());
  double acc = 0.0;
  c.below[0] = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    acc += r[i] * (b[i + 1] - b[i]);
    c.below[i + 1] = acc;
  }
  c.above = c.below;
  return c;
}

PiecewiseCdf cdf_of(const AtomicMeasure& m) {
  PiecewiseCdf c;
  const auto a = m.atoms();
  const auto w = m.weights();
  c.knots.assign(a.begin(), a.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.below.push_back(acc);
    acc += w[i];
    c.above.push_back(acc);
  }
  return c;
}

// Integral over [0, h] of |d0 + (d1 - d0) s/h|.
double abs_linear_integral(double d0, double d1, double h) {
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0))
    return 0.5 * (std::abs(d0) + std::abs(d1)) * h;
  return 0.5 * (d0 * d0 + d1 * d1) / (std::abs(d0) + std::abs(d1)) * h;
}

double w1_cdf(const PiecewiseCdf& a, const PiecewiseCdf& b) {
  const double ma = a.mass();
  const double mb = b.mass();
  if (std::abs(ma - mb) > 1e-12 * std::max(1.0, std::max(ma, mb)))
    throw DomainError("wasserstein1 needs measures of equal mass");
  std::vector<double> knots;
  knots.reserve(a.knots.size() + b.knots.size());
  std::merge(a.knots.begin(), a.knots.end(), b.knots.begin(), b.knots.end(),
             std::back_inserter(knots));
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double lo = knots[k];
    const double hi = knots[k + 1];
    const double d0 = a.right_limit(lo) - b.right_limit(lo);
    const double d1 = a.left_limit(hi) - b.left_limit(hi);
    total += abs_linear_integral(d0, d1, hi - lo);
  }
  return total;
}

}  // namespace

double total_mass(const DensityProfile& profile) { return profile.total_mass(); }

double total_variation(const DensityProfile& profile) {
  const auto r = profile.values();
  double tv = r.front() + r.back();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) tv += std::abs(r[i + 1] - r[i]);
  return tv;
}

double l1_distance(const DensityProfile& a, const DensityProfile& b) {
  std::vector<double> knots;
  std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
             b.breakpoints().end(), std::back_inserter(knots));
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double mid = 0.5 * (knots[k] + knots[k + 1]);
    total += std::abs(a.value_at(mid) - b.value_at(mid)) * (knots[k + 1] - knots[k]);
  }
  return total;
}

double wasserstein1(const DensityProfile& a, const DensityProfile& b) {
  return w1_cdf(cdf_of(a), cdf_of(b));
}
double wasserstein1(const DensityProfile& a, const AtomicMeasure& b) {
  return w1_cdf(cdf_of(a), cdf_of(b));
}
double wasserstein1(const AtomicMeasure& a, const DensityProfile& b) {
  return w1_cdf(cdf_of(a), cdf_of(b));
}
double wasserstein1(const AtomicMeasure& a, const AtomicMeasure& b) {
  return w1_cdf(cdf_of(a), cdf_of(b));
}

DensityProfile scaled(const DensityProfile& profile, double factor) {
  std::vector<double> r(profile.values().begin(), profile.values().end());
  for (double& v : r) v *= factor;
  return DensityProfile(std::vector<double>(profile.breakpoints().begin(), profile.breakpoints().end()),
                        std::move(r));
}

double wasserstein1_rescaled(const DensityProfile& a, const DensityProfile& b) {
  const double ma = a.total_mass();
  const double mb = b.total_mass();
  if (!(ma > 0.0) || !(mb > 0.0)) throw DomainError("wasserstein1_rescaled needs positive masses");
  // Normalise both to unit mass, then restore the scale of a.
  return ma * wasserstein1(scaled(a, 1.0 / ma), scaled(b, 1.0 / mb));
}

}  // namespace nlftl
