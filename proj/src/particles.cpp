#include "nlftl/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlftl/kernels.hpp"
#include "nlftl/metrics.hpp"
#include "nlftl/ode.hpp"

namespace nlftl {

namespace {

void check_ordering(std::span<const double> x, double t) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i + 1] > x[i]))
      throw InvariantViolation("particles " + std::to_string(i) + " and " +
                               std::to_string(i + 1) + " coincide or cross at t = " +
                               std::to_string(t));
}

void velocities(std::span<const double> x, double pm, const Kernel& kernel,
                const Mobility& mobility, Execution exec, std::span<double> out) {
  if (exec == Execution::parallel)
    kernels::omp::particle_velocities(x, pm, kernel, mobility, out);
  else
    kernels::serial::particle_velocities(x, pm, kernel, mobility, out);
}

ParticleSnapshot make_snapshot(ParticleState state) {
  const DensityProfile forward = reconstruct_density(state);
  const double gap = state.min_gap().first;
  const double mass = total_mass(forward);
  const double tv = total_variation(forward);
  return ParticleSnapshot{std::move(state), mass, tv, gap};
}

}  // namespace

ParticleState::ParticleState(double time, std::vector<double> positions, double particle_mass,
                             double max_density)
    : time_(time),
      positions_(std::move(positions)),
      particle_mass_(particle_mass),
      max_density_(max_density) {
  if (positions_.size() < 2) throw DomainError("a particle state needs at least two particles");
  if (!(particle_mass_ > 0.0)) throw DomainError("particle mass must be positive");
  if (!(max_density_ > 0.0)) throw DomainError("maximal density must be positive");
  check_ordering(positions_, time_);
}

std::pair<double, std::size_t> ParticleState::min_gap() const {
  double best = positions_[1] - positions_[0];
  std::size_t at = 0;
  for (std::size_t i = 1; i + 1 < positions_.size(); ++i) {
    const double g = positions_[i + 1] - positions_[i];
    if (g < best) {
      best = g;
      at = i;
    }
  }
  return {best, at};
}

ParticleState init_particles(const DensityProfile& profile, std::size_t n, double max_density) {
  if (n == 0) throw DomainError("init_particles needs N >= 1");
  const double mass = profile.total_mass();
  if (!(mass > 0.0)) throw DomainError("init_particles needs a profile with positive mass");
  std::vector<double> x(n + 1);
  x.front() = profile.support_left();
  x.back() = profile.support_right();
  const double pm = mass / static_cast<double>(n);
  for (std::size_t i = 1; i < n; ++i) x[i] = profile.cdf_inverse(static_cast<double>(i) * pm);
  return ParticleState(0.0, std::move(x), pm, max_density);
}

ParticleState jammed_configuration(std::size_t n, double mass, double max_density,
                                   double center) {
  if (n == 0) throw DomainError("jammed_configuration needs N >= 1");
  const double pm = mass / static_cast<double>(n);
  const double gap = pm / max_density;
  const double left = center - 0.5 * mass / max_density;
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = left + static_cast<double>(i) * gap;
  return ParticleState(0.0, std::move(x), pm, max_density);
}

std::vector<double> rhs(const ParticleState& state, const Kernel& kernel,
                        const Mobility& mobility, Execution exec) {
  std::vector<double> out(state.positions().size());
  velocities(state.positions(), state.particle_mass(), kernel, mobility, exec, out);
  return out;
}

DensityProfile reconstruct_density(const ParticleState& state, Reconstruction mode) {
  const auto x = state.positions();
  const std::size_t n = state.cells();
  const double pm = state.particle_mass();
  if (mode == Reconstruction::forward) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = pm / (x[i + 1] - x[i]);
    return DensityProfile(std::vector<double>(x.begin(), x.end()), std::move(r));
  }

  // Cells of particle i span the midpoints to its neighbours; the end
  // particles keep half-cells of zero density.
  std::vector<double> b;
  std::vector<double> r;
  b.reserve(n + 2);
  r.reserve(n + 1);
  b.push_back(x[0]);
  r.push_back(0.0);
  for (std::size_t i = 1; i < n; ++i) {
    b.push_back(0.5 * (x[i - 1] + x[i]));
    r.push_back(2.0 * pm / (x[i + 1] - x[i - 1]));
  }
  b.push_back(0.5 * (x[n - 1] + x[n]));
  r.push_back(0.0);
  b.push_back(x[n]);
  return DensityProfile(std::move(b), std::move(r));
}

AtomicMeasure empirical_measure(const ParticleState& state) {
  const auto x = state.positions();
  const std::size_t n = state.cells();
  return AtomicMeasure(std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)),
                       std::vector<double>(n, state.particle_mass()));
}

ParticleTrajectory integrate(const ParticleState& initial, const Kernel& kernel,
                             const Mobility& mobility, double t_end,
                             std::span<const double> output_times,
                             const IntegrateOptions& options) {
  if (!(t_end > initial.time())) throw DomainError("integrate needs t_end after the state time");
  if (!(options.rtol > 0.0)) throw DomainError("integrator tolerance must be positive");
  if (!std::is_sorted(output_times.begin(), output_times.end()))
    throw DomainError("output times must be sorted");

  const double length = initial.support_length();
  const double pm = initial.particle_mass();
  // A state that starts below the jammed gap can only relax towards it.
  const double floor_gap = std::min(initial.jammed_gap(), initial.min_gap().first);

  ParticleTrajectory traj;
  traj.gap_slack = 10.0 * options.rtol * length;
  traj.min_gap_over_steps = initial.min_gap().first;
  traj.snapshots.push_back(make_snapshot(initial));

  ode::Options ode_opt;
  ode_opt.rtol = options.rtol;
  ode_opt.atol = options.atol_scale * length;
  // Near the jammed gap the system is stiff; an explicit step beyond the
  // stability bound turns rounding noise into gap compression that nothing
  // restores, so the step is held below it.
  const double far_field =
      2.0 * mobility.speed(0.0) * initial.total_mass() * kernel.lipschitz_bound(-length, length);
  std::vector<double> stiffness(initial.cells());
  ode_opt.step_limit = [&](double, std::span<const double> y) {
    if (options.exec == Execution::parallel)
      kernels::omp::gap_stiffness(y, pm, kernel, mobility, stiffness);
    else
      kernels::serial::gap_stiffness(y, pm, kernel, mobility, stiffness);
    const double lambda = far_field + *std::max_element(stiffness.begin(), stiffness.end());
    return lambda > 0.0 ? 3.0 / lambda : std::numeric_limits<double>::infinity();
  };
  ode::DormandPrince stepper(initial.positions().size(), ode_opt);

  // A trial stage that crosses particles is an oversized step, not a breach:
  // NaN velocities make the stepper reject it and shrink.
  const ode::Rhs f = [&](double, std::span<const double> y, std::span<double> dydt) {
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
      if (!(y[i + 1] > y[i])) {
        std::fill(dydt.begin(), dydt.end(), std::numeric_limits<double>::quiet_NaN());
        return;
      }
    velocities(y, pm, kernel, mobility, options.exec, dydt);
  };
  std::size_t step = 0;
  const ode::StepHook hook = [&](double t, std::span<const double> y) {
    ++step;
    double gap = y[1] - y[0];
    std::size_t at = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
      if (y[i + 1] - y[i] < gap) {
        gap = y[i + 1] - y[i];
        at = i;
      }
    traj.min_gap_over_steps = std::min(traj.min_gap_over_steps, gap);
    if (gap < floor_gap - traj.gap_slack)
      throw InvariantViolation("maximum principle breached at step " + std::to_string(step) +
                               ", t = " + std::to_string(t) + ": gap between particles " +
                               std::to_string(at) + " and " + std::to_string(at + 1) + " is " +
                               std::to_string(gap) + " < m/(MN) = " + std::to_string(floor_gap));
  };

  std::vector<double> stops;
  for (double t : output_times)
    if (t > initial.time() && t < t_end && (stops.empty() || t > stops.back())) stops.push_back(t);
  stops.push_back(t_end);

  double t = initial.time();
  std::vector<double> y(initial.positions().begin(), initial.positions().end());
  for (double stop : stops) {
    stepper.advance(f, t, y, stop, hook);
    traj.snapshots.push_back(make_snapshot(ParticleState(t, y, pm, initial.max_density())));
  }
  traj.accepted_steps = stepper.stats().accepted;
  traj.rejected_steps = stepper.stats().rejected;
  return traj;
}

SettleResult integrate_until_settled(const ParticleState& initial, const Kernel& kernel,
                                     const Mobility& mobility, double threshold, double chunk,
                                     double t_max, const IntegrateOptions& options) {
  ParticleState state = initial;
  auto max_speed = [&](const ParticleState& s) {
    double m = 0.0;
    for (double v : rhs(s, kernel, mobility, options.exec)) m = std::max(m, std::abs(v));
    return m;
  };
  double speed = max_speed(state);
  while (speed >= threshold && state.time() < t_max) {
    const double t_next = std::min(state.time() + chunk, t_max);
    ParticleTrajectory seg = integrate(state, kernel, mobility, t_next, {}, options);
    state = seg.final_state();
    speed = max_speed(state);
  }
  return SettleResult{state, speed, speed < threshold};
}

}  // namespace nlftl
