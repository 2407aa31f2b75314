#pragma once

// Scenario configuration. A configuration is one JSON document; named
// builtins are overlays applied on top of a defaults block, and any user
// document is overlaid last.

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlftl/godunov.hpp"
#include "nlftl/model.hpp"

namespace nlftl {

enum class ProfileKind { uniform_step, two_step, parabola, explicit_cells };

/// Initial datum. uniform-step uses left/right/value, two-step uses `steps`
/// (each [left, right, value]), parabola is amplitude (1 - ((x - center)/half_width)^2)
/// averaged exactly over `cells` equal cells, explicit uses breakpoints/values.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::uniform_step;
  double left = -1.0;
  double right = 1.0;
  double value = 0.3;
  std::vector<std::array<double, 3>> steps;
  double center = 0.0;
  double half_width = 1.0;
  double amplitude = 0.75;
  std::size_t cells = 10000;
  std::vector<double> breakpoints;
  std::vector<double> values;

  DensityProfile build() const;
  bool operator==(const ProfileSpec&) const = default;
};

enum class TrajectorySource { godunov, particles };

struct EntropySettings {
  /// Evaluate on the time-constant initial profile instead of a computed run.
  bool frozen = false;
  TrajectorySource source = TrajectorySource::godunov;
  /// Constants c; empty means 0, 0.1 M, ..., M.
  std::vector<double> constants;
  /// Plateau horizons T swept in frozen mode.
  std::vector<double> plateaus{1, 2, 5, 10, 20, 50, 100, 200};
  /// Snapshot spacing of the trajectory fed to the residual.
  double snapshot_interval = 0.01;
  double quadrature_dx = 1.0 / 256.0;
  int gauss_points = 3;

  bool operator==(const EntropySettings&) const = default;
};

struct ConvergenceSettings {
  std::vector<std::size_t> particle_counts{75, 150, 300, 600};
  std::size_t reference_cells = 2400;

  bool operator==(const ConvergenceSettings&) const = default;
};

struct ScenarioConfig {
  std::string name = "custom";
  ProfileSpec profile;
  Kernel kernel = standard_gaussian();
  Mobility mobility;
  std::size_t particles = 300;
  double rtol = 1e-8;
  Grid grid;
  double cfl = 0.45;
  bool interface_fields = false;
  double t_end = 1.0;
  /// Spacing of output times when `output_times` is empty.
  double output_interval = 0.05;
  std::vector<double> output_times;
  std::string out_dir = "out";
  EntropySettings entropy;
  ConvergenceSettings convergence;

  /// Output times in (0, t_end], always ending at t_end.
  std::vector<double> resolved_output_times() const;
  bool operator==(const ScenarioConfig&) const = default;
};

std::vector<std::string> builtin_names();

/// The fully populated builtin; ConfigError for an unknown name.
ScenarioConfig builtin_scenario(const std::string& name);

/// Parses a configuration document. If it names a `scenario`, that builtin
/// is the base; otherwise the defaults are. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Complete document; parse_config(emit_config(c)) == c.
nlohmann::ordered_json emit_config(const ScenarioConfig& config);

/// Throws ConfigError unless counts are positive, t_end > 0, the profile is
/// admissible (0 <= rho <= M, positive mass) and the grid contains it.
void validate(const ScenarioConfig& config);

}  // namespace nlftl
