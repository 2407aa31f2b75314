#include "nlftl/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlftl::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double safety = 0.9;
constexpr double min_factor = 0.2;
constexpr double max_factor = 5.0;

}  // namespace

DormandPrince::DormandPrince(std::size_t dim, Options options)
    : opt_(options),
      k1_(dim), k2_(dim), k3_(dim), k4_(dim), k5_(dim), k6_(dim), k7_(dim),
      ytmp_(dim), ynew_(dim) {
  if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0))
    throw std::invalid_argument("ode tolerances must be positive");
}

double DormandPrince::initial_step(std::span<const double> y, double span) {
  // Hairer-Norsett-Wanner starting step, first-derivative part only.
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double sc = opt_.atol + opt_.rtol * std::abs(y[i]);
    d0 = std::max(d0, std::abs(y[i]) / sc);
    d1 = std::max(d1, std::abs(k1_[i]) / sc);
  }
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  return std::min({h, span, opt_.max_step});
}

void DormandPrince::advance(const Rhs& rhs, double& t, std::vector<double>& y, double t_end,
                            const StepHook& hook) {
  const std::size_t n = y.size();
  if (t_end <= t) return;

  rhs(t, y, k1_);
  ++stats_.evaluations;
  if (h_ <= 0.0) h_ = initial_step(y, t_end - t);

  double limit = opt_.step_limit ? opt_.step_limit(t, y) : opt_.max_step;
  bool last_rejected = false;
  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt_.max_steps) throw std::runtime_error("ode: step budget exhausted");
    double h = std::min({h_, opt_.max_step, limit});
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("ode: step size underflow at t = " + std::to_string(t));
    // Stretch by up to 1% rather than leave a sliver before t_end.
    const bool clipped = t + 1.01 * h >= t_end;
    if (clipped) h = t_end - t;

    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * a21 * k1_[i];
    rhs(t + c2 * h, ytmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    rhs(t + c3 * h, ytmp_, k3_);
    for (std::size_t i = 0; i < n; ++i)
      ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    rhs(t + c4 * h, ytmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    rhs(t + c5 * h, ytmp_, k5_);
    for (std::size_t i = 0; i < n; ++i)
      ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                             a65 * k5_[i]);
    rhs(t + h, ytmp_, k6_);
    for (std::size_t i = 0; i < n; ++i)
      ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                             a76 * k6_[i]);
    rhs(t + h, ynew_, k7_);
    stats_.evaluations += 6;

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                            e6 * k6_[i] + e7 * k7_[i]);
      const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      const double r = std::abs(e) / sc;
      finite = finite && std::isfinite(r);
      err = std::max(err, r);
    }
    if (!finite) err = std::numeric_limits<double>::infinity();

    double factor = min_factor;
    if (err == 0.0)
      factor = max_factor;
    else if (finite)
      factor = std::clamp(safety * std::pow(err, -0.2), min_factor, max_factor);
    if (err <= 1.0) {
      t = clipped ? t_end : t + h;
      y.swap(ynew_);
      k1_.swap(k7_);  // FSAL
      ++stats_.accepted;
      if (hook) hook(t, y);
      if (opt_.step_limit) limit = opt_.step_limit(t, y);
      // A clipped step says nothing about the natural step length.
      if (!clipped) h_ = last_rejected ? h : h * factor;
      last_rejected = false;
    } else {
      ++stats_.rejected;
      h_ = h * factor;
      last_rejected = true;
    }
  }
}

}  // namespace nlftl::ode
