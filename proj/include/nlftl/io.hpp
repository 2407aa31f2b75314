#pragma once

// File emission. Every number is printed with %.17g, so outputs round-trip
// exactly and identical runs give identical bytes.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlftl/entropy.hpp"
#include "nlftl/model.hpp"
#include "nlftl/particles.hpp"

namespace nlftl::io {

std::string format_double(double v);

struct MetricsRow {
  double t = 0.0;
  double mass = 0.0;
  double tv = 0.0;
  /// NaN when the method has no particles; written as an empty field.
  double min_gap = 0.0;
  double w1_to_reference = 0.0;
};

/// `t,x_left,x_right,rho`, one row per cell per snapshot.
void write_density_csv(const std::filesystem::path& path, std::span<const double> times,
                       std::span<const DensityProfile> profiles);

/// `t,i,x`, one row per particle per snapshot.
void write_positions_csv(const std::filesystem::path& path, const ParticleTrajectory& traj);

/// `t,mass,tv,min_gap,w1_to_reference`.
void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows);

void write_entropy_jsonl(const std::filesystem::path& path, std::span<const EntropyReport> reports);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// Writes text to a file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nlftl::io
