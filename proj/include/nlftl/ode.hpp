#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace nlftl::ode {

struct Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
  /// Optional state-dependent cap on the step, e.g. a stability bound for a
  /// stiff regime; evaluated at the start and after every accepted step.
  std::function<double(double t, std::span<const double> y)> step_limit;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
/// Called after every accepted step with the new time and state.
using StepHook = std::function<void(double t, std::span<const double> y)>;

/// Embedded Dormand-Prince 5(4) pair with FSAL and max-norm error control.
///
/// advance() lands exactly on the requested end time by clipping the final
/// step, so snapshots are genuine integrator states rather than
/// interpolants. The step size carries over between calls.
class DormandPrince {
 public:
  DormandPrince(std::size_t dim, Options options);

  void advance(const Rhs& rhs, double& t, std::vector<double>& y, double t_end,
               const StepHook& hook = {});

  const Stats& stats() const { return stats_; }
  double last_step() const { return h_; }

 private:
  double initial_step(std::span<const double> y, double span);

  Options opt_;
  Stats stats_;
  double h_ = 0.0;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
};

}  // namespace nlftl::ode
