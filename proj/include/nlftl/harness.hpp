#pragma once

// Scenario runs: single-method simulations, the particle/Godunov comparison,
// the convergence table and the entropy audit, plus their file outputs under
// <out>/<scenario>/<method>/.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlftl/entropy.hpp"
#include "nlftl/godunov.hpp"
#include "nlftl/io.hpp"
#include "nlftl/particles.hpp"
#include "nlftl/scenario.hpp"

namespace nlftl {

ParticleTrajectory simulate_particles(const ScenarioConfig& config,
                                      std::span<const double> output_times,
                                      std::size_t particles = 0);
FVTrajectory simulate_godunov(const ScenarioConfig& config, std::span<const double> output_times,
                              std::size_t cells = 0);

/// Forward reconstructions of every snapshot.
ProfileTrajectory particle_profiles(const ParticleTrajectory& traj,
                                    Reconstruction mode = Reconstruction::forward);
ProfileTrajectory godunov_profiles(const FVTrajectory& traj);

/// Metrics rows; each W1 is taken against the matching reference profile
/// after rescaling to equal mass.
std::vector<io::MetricsRow> particle_metrics(const ParticleTrajectory& traj,
                                             std::span<const DensityProfile> references);
std::vector<io::MetricsRow> godunov_metrics(const FVTrajectory& traj,
                                            std::span<const DensityProfile> references);

struct ComparisonRow {
  double t;
  double l1;
  double w1;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  ParticleTrajectory particles;
  FVTrajectory godunov;
};

/// Both schemes on the same physics; distances between the centered particle
/// reconstruction and the Godunov profile at every output time.
ComparisonReport run_compare(const ScenarioConfig& config);

struct ConvergenceRow {
  std::size_t particles;
  double error;
  /// e_N / e_{next N}; absent on the last row.
  std::optional<double> ratio;
};

struct ConvergenceTable {
  std::size_t reference_cells;
  double t_end;
  std::vector<ConvergenceRow> rows;
};

/// e_N = L1(forward particle density, Godunov at J_ref) at t_end. Throws
/// ConfigError unless the list increases and J_ref >= 4 max N.
ConvergenceTable run_convergence(const ScenarioConfig& config,
                                 std::span<const std::size_t> particle_counts,
                                 std::size_t reference_cells);

struct EntropyAudit {
  std::string source;
  std::vector<EntropyReport> reports;
  /// Frozen mode: smallest swept T with a flagged residual.
  std::optional<double> first_flagged_plateau;
  bool any_violation = false;
};

/// Test functions of the sweep: in frozen mode the two-bump mollifier at
/// -1/2, 1/2 for every configured plateau; otherwise that mollifier and
/// cosine-squared bumps tiling the initial support, all with T = t_end - 1.
std::vector<TestFunction> audit_test_functions(const ScenarioConfig& config);
std::vector<double> audit_constants(const ScenarioConfig& config);
EntropyAudit run_entropy_audit(const ScenarioConfig& config);

std::filesystem::path method_dir(const ScenarioConfig& config, const std::string& method);

/// meta.json contents: resolved configuration, method, version, diagnostics.
nlohmann::ordered_json meta_document(const ScenarioConfig& config, const std::string& method,
                                     nlohmann::ordered_json diagnostics);

void write_particle_run(const std::filesystem::path& dir, const ScenarioConfig& config,
                        const ParticleTrajectory& traj,
                        std::span<const DensityProfile> references);
void write_godunov_run(const std::filesystem::path& dir, const ScenarioConfig& config,
                       const FVTrajectory& traj, std::span<const DensityProfile> references);
void write_comparison(const std::filesystem::path& dir, const ScenarioConfig& config,
                      const ComparisonReport& report);
void write_convergence(const std::filesystem::path& dir, const ScenarioConfig& config,
                       const ConvergenceTable& table);
void write_entropy_audit(const std::filesystem::path& dir, const ScenarioConfig& config,
                         const EntropyAudit& audit);

const char* version_string();

}  // namespace nlftl
