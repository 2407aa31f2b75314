#include "nlftl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nlftl::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_density_csv(const std::filesystem::path& path, std::span<const double> times,
                       std::span<const DensityProfile> profiles) {
  std::string s = "t,x_left,x_right,rho\n";
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const std::string t = format_double(times[k]);
    const auto b = profiles[k].breakpoints();
    const auto r = profiles[k].values();
    for (std::size_t i = 0; i < r.size(); ++i)
      s += t + ',' + format_double(b[i]) + ',' + format_double(b[i + 1]) + ',' +
           format_double(r[i]) + '\n';
  }
  write_text(path, s);
}

void write_positions_csv(const std::filesystem::path& path, const ParticleTrajectory& traj) {
  std::string s = "t,i,x\n";
  for (const auto& snap : traj.snapshots) {
    const std::string t = format_double(snap.state.time());
    const auto x = snap.state.positions();
    for (std::size_t i = 0; i < x.size(); ++i)
      s += t + ',' + std::to_string(i) + ',' + format_double(x[i]) + '\n';
  }
  write_text(path, s);
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows) {
  std::string s = "t,mass,tv,min_gap,w1_to_reference\n";
  for (const auto& r : rows) {
    s += format_double(r.t) + ',' + format_double(r.mass) + ',' + format_double(r.tv) + ',';
    if (!std::isnan(r.min_gap)) s += format_double(r.min_gap);
    s += ',' + format_double(r.w1_to_reference) + '\n';
  }
  write_text(path, s);
}

void write_entropy_jsonl(const std::filesystem::path& path,
                         std::span<const EntropyReport> reports) {
  std::string s;
  for (const auto& r : reports) s += to_json_line(r) + '\n';
  write_text(path, s);
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  write_text(path, doc.dump(2) + '\n');
}

}  // namespace nlftl::io
