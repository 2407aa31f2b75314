#include "nlftl/godunov.hpp"

#include <algorithm>
#include <cmath>

namespace nlftl {

double godunov_flux(double u_left, double u_right, const Mobility& mobility) {
  const double m = mobility.max_density;
  const double ul = std::clamp(u_left, 0.0, m);
  const double ur = std::clamp(u_right, 0.0, m);
  if (ul <= ur) return std::min(mobility.flux(ul), mobility.flux(ur));
  const double peak = mobility.flux_peak();
  if (ur <= peak && peak <= ul) return mobility.flux(peak);
  return std::max(mobility.flux(ul), mobility.flux(ur));
}

GodunovSolver::GodunovSolver(Grid grid, Kernel kernel, Mobility mobility, GodunovOptions options)
    : grid_(grid), kernel_(kernel), mobility_(mobility), options_(options) {
  if (grid_.cells == 0 || !(grid_.right > grid_.left))
    throw DomainError("grid needs at least one cell and right > left");
  if (!(options_.cfl > 0.0 && options_.cfl < 1.0)) throw DomainError("cfl must lie in (0, 1)");
  tables_ = kernels::make_grid_tables(kernel_, grid_.dx(), grid_.cells);
}

FVState GodunovSolver::sample(const DensityProfile& profile) const {
  if (profile.support_left() < grid_.left || profile.support_right() > grid_.right)
    throw DomainError("grid does not contain the initial support");
  const double dx = grid_.dx();
  const double snap = 1e-9 * dx;
  const auto b = profile.breakpoints();
  const auto r = profile.values();
  FVState s;
  s.rho.resize(grid_.cells);
  for (std::size_t j = 0; j < grid_.cells; ++j) {
    const double lo = grid_.edge(j);
    const double hi = grid_.edge(j + 1);
    if (hi <= profile.left() + snap || lo >= profile.right() - snap) {
      s.rho[j] = 0.0;
      continue;
    }
    const auto it = std::upper_bound(b.begin(), b.end(), grid_.center(j));
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - b.begin() - 1, 0));
    if (k < r.size() && b[k] <= lo + snap && b[k + 1] >= hi - snap)
      s.rho[j] = r[k];
    else
      s.rho[j] = (profile.cdf(hi) - profile.cdf(lo)) / dx;
  }
  return s;
}

DensityProfile GodunovSolver::to_profile(const FVState& state) const {
  std::vector<double> edges(grid_.cells + 1);
  for (std::size_t j = 0; j <= grid_.cells; ++j) edges[j] = grid_.edge(j);
  return DensityProfile(std::move(edges), state.rho);
}

double GodunovSolver::mass(const FVState& state) const {
  double s = 0.0;
  for (double r : state.rho) s += r;
  return s * grid_.dx();
}

SplitFields GodunovSolver::split_fields(const FVState& state) const {
  SplitFields f{std::vector<double>(grid_.cells), std::vector<double>(grid_.cells)};
  if (options_.exec == Execution::parallel)
    kernels::omp::split_fields(state.rho, tables_, grid_.dx(), f.kplus, f.kminus);
  else
    kernels::serial::split_fields(state.rho, tables_, grid_.dx(), f.kplus, f.kminus);
  return f;
}

// Fields at all J + 1 interfaces; the two outer ones face ghost vacuum and
// only ever multiply a zero flux.
SplitFields GodunovSolver::interface_split(const FVState& state) const {
  const std::size_t n = grid_.cells;
  SplitFields f{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  if (n < 2) return f;
  std::span<double> kp(f.kplus.data() + 1, n - 1);
  std::span<double> km(f.kminus.data() + 1, n - 1);
  if (options_.exec == Execution::parallel)
    kernels::omp::split_fields_at_interfaces(state.rho, tables_, grid_.dx(), kp, km);
  else
    kernels::serial::split_fields_at_interfaces(state.rho, tables_, grid_.dx(), kp, km);
  return f;
}

std::vector<double> GodunovSolver::curvature(const FVState& state) const {
  std::vector<double> dk(grid_.cells);
  if (options_.exec == Execution::parallel)
    kernels::omp::curvature_field(state.rho, tables_, grid_.dx(), dk);
  else
    kernels::serial::curvature_field(state.rho, tables_, grid_.dx(), dk);
  return dk;
}

std::vector<double> GodunovSolver::source_term(const FVState& state) const {
  std::vector<double> s = curvature(state);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] *= mobility_.flux(state.rho[j]);
  return s;
}

double GodunovSolver::cfl_dt(const FVState& state, const SplitFields& fields,
                             std::span<const double> dk, double cap) const {
  double transport = 0.0;
  for (std::size_t j = 0; j < fields.kplus.size(); ++j)
    transport = std::max(transport, std::abs(fields.kplus[j]) + std::abs(fields.kminus[j]));
  double reaction = 0.0;
  for (std::size_t j = 0; j < dk.size(); ++j)
    reaction = std::max(reaction, std::abs(mobility_.flux_derivative(state.rho[j]) * dk[j]));

  double dt = cap;
  const double speed = transport * mobility_.max_flux_slope();
  if (speed > 0.0) dt = std::min(dt, options_.cfl * grid_.dx() / speed);
  if (reaction > 0.0) dt = std::min(dt, options_.cfl / reaction);
  return dt;
}

double GodunovSolver::cfl_dt(const FVState& state, double cap) const {
  const SplitFields fields =
      options_.interface_fields ? interface_split(state) : split_fields(state);
  const std::vector<double> dk =
      options_.interface_fields ? std::vector<double>() : curvature(state);
  return cfl_dt(state, fields, dk, cap);
}

FVState GodunovSolver::step(const FVState& state, double dt, StepReport* report) const {
  if (options_.interface_fields) return step_with(state, interface_split(state), {}, dt, report);
  return step_with(state, split_fields(state), curvature(state), dt, report);
}

FVState GodunovSolver::step_with(const FVState& state, const SplitFields& fields,
                                 std::span<const double> dk, double dt,
                                 StepReport* report) const {
  const std::size_t n = grid_.cells;
  const double dx = grid_.dx();
  const auto& rho = state.rho;

  // Interface i sits between cells i-1 and i, with vacuum ghosts outside.
  // F- upwinds rightward transport (K- <= 0), F+ the mirrored leftward one.
  std::vector<double> fplus(n + 1), fminus(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double ul = i > 0 ? rho[i - 1] : 0.0;
    const double ur = i < n ? rho[i] : 0.0;
    fminus[i] = godunov_flux(ul, ur, mobility_);
    fplus[i] = godunov_flux(ur, ul, mobility_);
  }

  FVState next{state.time + dt, std::vector<double>(n)};
  StepReport rep;
  rep.dt = dt;
  const double cap = mobility_.max_density;
  for (std::size_t j = 0; j < n; ++j) {
    double rate;
    if (options_.interface_fields) {
      rate = (fields.kplus[j + 1] * fplus[j + 1] - fields.kplus[j] * fplus[j] +
              fields.kminus[j + 1] * fminus[j + 1] - fields.kminus[j] * fminus[j]) /
             dx;
    } else {
      rate = fields.kplus[j] * (fplus[j + 1] - fplus[j]) / dx +
             fields.kminus[j] * (fminus[j + 1] - fminus[j]) / dx +
             mobility_.flux(rho[j]) * dk[j];
    }
    double v = rho[j] + dt * rate;
    const double clamped = std::clamp(v, 0.0, cap);
    if (clamped != v) {
      const double amount = std::abs(clamped - v);
      rep.clamped_mass += amount * dx;
      rep.max_clamp = std::max(rep.max_clamp, amount);
      v = clamped;
    }
    next.rho[j] = v;
  }
  rep.clamp_warning = rep.max_clamp > 1e-6 * cap;
  if (report) *report = rep;
  return next;
}

FVTrajectory GodunovSolver::run(const DensityProfile& initial, double t_end,
                                std::span<const double> output_times) const {
  if (!(t_end > 0.0)) throw DomainError("godunov run needs t_end > 0");
  FVTrajectory traj;
  FVState state = sample(initial);
  traj.initial_mass = mass(state);
  traj.snapshots.push_back({0.0, to_profile(state), traj.initial_mass});

  std::vector<double> stops;
  for (double t : output_times)
    if (t > 0.0 && t < t_end && (stops.empty() || t > stops.back())) stops.push_back(t);
  stops.push_back(t_end);

  for (double stop : stops) {
    while (state.time < stop) {
      const SplitFields fields =
          options_.interface_fields ? interface_split(state) : split_fields(state);
      const std::vector<double> dk =
          options_.interface_fields ? std::vector<double>() : curvature(state);
      double dt = cfl_dt(state, fields, dk, stop - state.time);
      const bool last = dt >= (stop - state.time) * (1.0 - 1e-12);
      StepReport rep;
      state = step_with(state, fields, dk, last ? stop - state.time : dt, &rep);
      if (last) state.time = stop;
      ++traj.steps;
      traj.clamped_mass += rep.clamped_mass;
      if (rep.clamp_warning) ++traj.clamp_warnings;
    }
    traj.snapshots.push_back({stop, to_profile(state), mass(state)});
  }
  return traj;
}

}  // namespace nlftl
