#include "nlftl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlftl/kernels.hpp"
#include "nlftl/metrics.hpp"

#ifndef NLFTL_VERSION
#define NLFTL_VERSION "0.0.0"
#endif

namespace nlftl {

const char* version_string() { return NLFTL_VERSION; }

ParticleTrajectory simulate_particles(const ScenarioConfig& config,
                                      std::span<const double> output_times,
                                      std::size_t particles) {
  const std::size_t n = particles ? particles : config.particles;
  const ParticleState init =
      init_particles(config.profile.build(), n, config.mobility.max_density);
  IntegrateOptions opt;
  opt.rtol = config.rtol;
  return integrate(init, config.kernel, config.mobility, config.t_end, output_times, opt);
}

FVTrajectory simulate_godunov(const ScenarioConfig& config, std::span<const double> output_times,
                              std::size_t cells) {
  Grid grid = config.grid;
  if (cells) grid.cells = cells;
  GodunovOptions opt;
  opt.cfl = config.cfl;
  opt.interface_fields = config.interface_fields;
  const GodunovSolver solver(grid, config.kernel, config.mobility, opt);
  return solver.run(config.profile.build(), config.t_end, output_times);
}

ProfileTrajectory particle_profiles(const ParticleTrajectory& traj, Reconstruction mode) {
  ProfileTrajectory out;
  for (const auto& s : traj.snapshots) out.push(s.state.time(), reconstruct_density(s.state, mode));
  return out;
}

ProfileTrajectory godunov_profiles(const FVTrajectory& traj) {
  ProfileTrajectory out;
  for (const auto& s : traj.snapshots) out.push(s.time, s.profile);
  return out;
}

namespace {

const DensityProfile& reference_at(std::span<const DensityProfile> refs, std::size_t k) {
  return refs.size() == 1 ? refs.front() : refs[k];
}

}  // namespace

std::vector<io::MetricsRow> particle_metrics(const ParticleTrajectory& traj,
                                             std::span<const DensityProfile> references) {
  std::vector<io::MetricsRow> rows;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    const DensityProfile forward = reconstruct_density(s.state);
    rows.push_back({s.state.time(), s.mass, s.total_variation, s.min_gap,
                    wasserstein1_rescaled(forward, reference_at(references, k))});
  }
  return rows;
}

std::vector<io::MetricsRow> godunov_metrics(const FVTrajectory& traj,
                                            std::span<const DensityProfile> references) {
  std::vector<io::MetricsRow> rows;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    rows.push_back({s.time, s.mass, total_variation(s.profile),
                    std::numeric_limits<double>::quiet_NaN(),
                    wasserstein1_rescaled(s.profile, reference_at(references, k))});
  }
  return rows;
}

ComparisonReport run_compare(const ScenarioConfig& config) {
  const std::vector<double> times = config.resolved_output_times();
  ComparisonReport rep;
  rep.particles = simulate_particles(config, times);
  rep.godunov = simulate_godunov(config, times);
  if (rep.particles.snapshots.size() != rep.godunov.snapshots.size())
    throw InvariantViolation("particle and godunov snapshot times differ");
  for (std::size_t k = 0; k < rep.godunov.snapshots.size(); ++k) {
    const DensityProfile centered =
        reconstruct_density(rep.particles.snapshots[k].state, Reconstruction::centered);
    const DensityProfile& fv = rep.godunov.snapshots[k].profile;
    rep.rows.push_back({rep.godunov.snapshots[k].time, l1_distance(centered, fv),
                        wasserstein1_rescaled(centered, fv)});
  }
  return rep;
}

ConvergenceTable run_convergence(const ScenarioConfig& config,
                                 std::span<const std::size_t> particle_counts,
                                 std::size_t reference_cells) {
  if (particle_counts.empty()) throw ConfigError("convergence needs at least one N");
  for (std::size_t i = 1; i < particle_counts.size(); ++i)
    if (particle_counts[i] <= particle_counts[i - 1])
      throw ConfigError("convergence particle counts must increase strictly");
  if (reference_cells < 4 * particle_counts.back())
    throw ConfigError("reference cell count must be at least 4 max N");

  ConvergenceTable table;
  table.reference_cells = reference_cells;
  table.t_end = config.t_end;
  const FVTrajectory ref = simulate_godunov(config, {}, reference_cells);
  const DensityProfile& target = ref.snapshots.back().profile;
  for (std::size_t n : particle_counts) {
    const ParticleTrajectory p = simulate_particles(config, {}, n);
    table.rows.push_back({n, l1_distance(reconstruct_density(p.final_state()), target), {}});
  }
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i)
    table.rows[i].ratio = table.rows[i].error / table.rows[i + 1].error;
  return table;
}

std::vector<double> audit_constants(const ScenarioConfig& config) {
  if (!config.entropy.constants.empty()) return config.entropy.constants;
  std::vector<double> c;
  for (int k = 0; k <= 10; ++k) c.push_back(config.mobility.max_density * k / 10.0);
  return c;
}

std::vector<TestFunction> audit_test_functions(const ScenarioConfig& config) {
  std::vector<TestFunction> out;
  if (config.entropy.frozen) {
    for (double t : config.entropy.plateaus)
      out.push_back(mollifier_test_function({-0.5, 0.5}, 0.25, t));
    return out;
  }
  if (config.t_end < 1.0)
    throw ConfigError("an evolving entropy audit needs t_end >= 1 to hold the time cutoff");
  const double plateau = config.t_end - 1.0;
  out.push_back(mollifier_test_function({-0.5, 0.5}, 0.25, plateau));
  const DensityProfile p = config.profile.build();
  const double w = 0.25;
  for (double c = p.support_left(); c <= p.support_right() + 1e-12; c += w)
    out.push_back(cosine_test_function(c, w, plateau));
  return out;
}

EntropyAudit run_entropy_audit(const ScenarioConfig& config) {
  const auto& es = config.entropy;
  EntropyAudit audit;
  const std::vector<TestFunction> phis = audit_test_functions(config);
  const std::vector<double> constants = audit_constants(config);

  ProfileTrajectory traj;
  if (es.frozen) {
    audit.source = "frozen";
    double horizon = 0.0;
    for (const auto& phi : phis) horizon = std::max(horizon, phi.time_support_end());
    traj = frozen_trajectory(config.profile.build(), horizon, es.snapshot_interval);
  } else {
    std::vector<double> times;
    for (std::size_t k = 1;; ++k) {
      const double t = static_cast<double>(k) * es.snapshot_interval;
      if (t >= config.t_end * (1.0 - 1e-12)) break;
      times.push_back(t);
    }
    if (es.source == TrajectorySource::godunov) {
      audit.source = "godunov";
      traj = godunov_profiles(simulate_godunov(config, times));
    } else {
      audit.source = "particles";
      traj = particle_profiles(simulate_particles(config, times));
    }
  }

  const QuadratureResolution res{es.quadrature_dx, es.gauss_points};
  for (const auto& phi : phis) {
    bool flagged = false;
    for (double c : constants) {
      audit.reports.push_back(entropy_residual(traj, config.kernel, config.mobility, phi, c, res));
      flagged = flagged || audit.reports.back().violation;
    }
    if (flagged) {
      audit.any_violation = true;
      if (es.frozen && !audit.first_flagged_plateau) audit.first_flagged_plateau = phi.plateau;
    }
  }
  return audit;
}

std::filesystem::path method_dir(const ScenarioConfig& config, const std::string& method) {
  return std::filesystem::path(config.out_dir) / config.name / method;
}

nlohmann::ordered_json meta_document(const ScenarioConfig& config, const std::string& method,
                                     nlohmann::ordered_json diagnostics) {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["version"] = version_string();
  j["config"] = emit_config(config);
  j["diagnostics"] = std::move(diagnostics);
  return j;
}

void write_particle_run(const std::filesystem::path& dir, const ScenarioConfig& config,
                        const ParticleTrajectory& traj,
                        std::span<const DensityProfile> references) {
  const ProfileTrajectory fwd = particle_profiles(traj);
  const ProfileTrajectory ctr = particle_profiles(traj, Reconstruction::centered);
  io::write_positions_csv(dir / "trajectory.csv", traj);
  io::write_density_csv(dir / "density.csv", fwd.times, fwd.profiles);
  io::write_density_csv(dir / "density_centered.csv", ctr.times, ctr.profiles);
  const auto rows = particle_metrics(traj, references);
  io::write_metrics_csv(dir / "metrics.csv", rows);
  const double mass = traj.snapshots.front().state.total_mass();
  io::write_json(dir / "meta.json",
                 meta_document(config, "particles",
                               {{"mass", mass},
                                {"jammed_gap", mass / (config.mobility.max_density *
                                                       static_cast<double>(traj.final_state().cells()))},
                                {"min_gap_over_steps", traj.min_gap_over_steps},
                                {"gap_slack", traj.gap_slack},
                                {"accepted_steps", traj.accepted_steps},
                                {"rejected_steps", traj.rejected_steps}}));
}

void write_godunov_run(const std::filesystem::path& dir, const ScenarioConfig& config,
                       const FVTrajectory& traj, std::span<const DensityProfile> references) {
  const ProfileTrajectory p = godunov_profiles(traj);
  io::write_density_csv(dir / "density.csv", p.times, p.profiles);
  const auto rows = godunov_metrics(traj, references);
  io::write_metrics_csv(dir / "metrics.csv", rows);
  io::write_json(dir / "meta.json",
                 meta_document(config, "godunov",
                               {{"initial_mass", traj.initial_mass},
                                {"mass_drift", traj.mass_drift()},
                                {"steps", traj.steps},
                                {"clamped_mass", traj.clamped_mass},
                                {"clamp_warnings", traj.clamp_warnings}}));
}

void write_comparison(const std::filesystem::path& dir, const ScenarioConfig& config,
                      const ComparisonReport& report) {
  std::string s = "t,l1,w1\n";
  for (const auto& r : report.rows)
    s += io::format_double(r.t) + ',' + io::format_double(r.l1) + ',' + io::format_double(r.w1) +
         '\n';
  io::write_text(dir / "comparison.csv", s);
  io::write_json(dir / "meta.json",
                 meta_document(config, "compare",
                               {{"final_l1", report.rows.back().l1},
                                {"final_w1", report.rows.back().w1},
                                {"reconstruction", "centered"}}));
}

void write_convergence(const std::filesystem::path& dir, const ScenarioConfig& config,
                       const ConvergenceTable& table) {
  std::string s = "N,error,ratio\n";
  for (const auto& r : table.rows)
    s += std::to_string(r.particles) + ',' + io::format_double(r.error) + ',' +
         (r.ratio ? io::format_double(*r.ratio) : std::string()) + '\n';
  io::write_text(dir / "convergence.csv", s);
  io::write_json(dir / "meta.json",
                 meta_document(config, "converge",
                               {{"reference_cells", table.reference_cells},
                                {"t_end", table.t_end},
                                {"reconstruction", "forward"}}));
}

void write_entropy_audit(const std::filesystem::path& dir, const ScenarioConfig& config,
                         const EntropyAudit& audit) {
  io::write_entropy_jsonl(dir / "entropy.jsonl", audit.reports);
  // The directory may also hold a run of the same method, which owns meta.json.
  nlohmann::ordered_json diag{{"source", audit.source},
                              {"evaluations", audit.reports.size()},
                              {"any_violation", audit.any_violation}};
  if (audit.first_flagged_plateau) diag["first_flagged_plateau"] = *audit.first_flagged_plateau;
  else diag["first_flagged_plateau"] = nullptr;
  io::write_json(dir / "entropy_meta.json",
                 meta_document(config, "entropy-audit", std::move(diag)));
}

}  // namespace nlftl
