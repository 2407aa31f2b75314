#pragma once

// Nonlocal follow-the-leader particle scheme.
//
// N + 1 ordered particles each bound N cells of mass m/N. Particle i moves
// with
//
//   x_i' = -(m/N) [ v(R_i) sum_{j>i} K'(x_i - x_j) + v(R_{i-1}) sum_{j<i} K'(x_i - x_j) ],
//
// where R_i = (m/N) / (x_{i+1} - x_i) is the density of cell i. The forward
// term uses the cell ahead, the backward term the cell behind, and the
// outermost particles only see the interior.

#include <cstddef>
#include <span>
#include <vector>

#include "nlftl/model.hpp"

namespace nlftl {

enum class Execution { serial, parallel };

/// Ordered particle positions plus per-cell mass; immutable once built.
class ParticleState {
 public:
  ParticleState(double time, std::vector<double> positions, double particle_mass,
                double max_density);

  double time() const { return time_; }
  std::span<const double> positions() const { return positions_; }
  /// Number of cells N (one fewer than the number of particles).
  std::size_t cells() const { return positions_.size() - 1; }
  double particle_mass() const { return particle_mass_; }
  double max_density() const { return max_density_; }
  double total_mass() const { return particle_mass_ * static_cast<double>(cells()); }
  double support_length() const { return positions_.back() - positions_.front(); }

  /// Smallest gap x_{i+1} - x_i and the index i attaining it.
  std::pair<double, std::size_t> min_gap() const;
  /// Gap below which the discrete maximum principle is breached: m / (M N).
  double jammed_gap() const { return particle_mass_ / max_density_; }

 private:
  double time_;
  std::vector<double> positions_;
  double particle_mass_;
  double max_density_;
};

/// Quantile placement: x_0 and x_N at the support ends, and each cell
/// [x_{i-1}, x_i] carries mass m/N of the profile.
ParticleState init_particles(const DensityProfile& profile, std::size_t n,
                             double max_density = 1.0);

/// N cells all at the jammed gap m/(M N), centred on `center`: the
/// stationary configuration whose forward density is M on an interval of
/// length m/M.
ParticleState jammed_configuration(std::size_t n, double mass, double max_density,
                                   double center = 0.0);

/// Particle velocities. Throws InvariantViolation if two particles coincide
/// or cross.
std::vector<double> rhs(const ParticleState& state, const Kernel& kernel,
                        const Mobility& mobility, Execution exec = Execution::parallel);

enum class Reconstruction { forward, centered };

/// Forward: R_i on [x_i, x_{i+1}). Centered: 2m / (N (x_{i+1} - x_{i-1})) on
/// the cell of particle i bounded by the midpoints to its neighbours, with the
/// two outermost particles carrying zero density.
DensityProfile reconstruct_density(const ParticleState& state,
                                   Reconstruction mode = Reconstruction::forward);

/// Atoms of weight m/N at x_0 .. x_{N-1}, paired cell by cell with the
/// forward reconstruction.
AtomicMeasure empirical_measure(const ParticleState& state);

struct IntegrateOptions {
  double rtol = 1e-8;
  /// Absolute tolerance as a fraction of the initial support length.
  double atol_scale = 1e-10;
  Execution exec = Execution::parallel;
};

struct ParticleSnapshot {
  ParticleState state;
  double mass;
  double total_variation;
  double min_gap;
};

struct ParticleTrajectory {
  std::vector<ParticleSnapshot> snapshots;
  /// Smallest gap seen after any accepted step.
  double min_gap_over_steps = 0.0;
  /// Slack granted to the maximum principle: 10 rtol (support length).
  double gap_slack = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  const ParticleState& final_state() const { return snapshots.back().state; }
};

/// Advances to t_end, snapshotting at the initial time, every output time in
/// (start, t_end] and t_end itself. Throws InvariantViolation when an
/// accepted step breaches min gap >= m/(M N) - gap_slack.
ParticleTrajectory integrate(const ParticleState& initial, const Kernel& kernel,
                             const Mobility& mobility, double t_end,
                             std::span<const double> output_times,
                             const IntegrateOptions& options = {});

struct SettleResult {
  ParticleState state;
  double max_speed;
  bool settled;
};

/// Integrates in chunks of `chunk` time units until max |x_i'| < threshold or
/// t_max is reached.
SettleResult integrate_until_settled(const ParticleState& initial, const Kernel& kernel,
                                     const Mobility& mobility, double threshold,
                                     double chunk = 1.0, double t_max = 1e4,
                                     const IntegrateOptions& options = {});

}  // namespace nlftl
