#include "nlftl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nlftl {

using nlohmann::json;
using nlohmann::ordered_json;

DensityProfile ProfileSpec::build() const {
  switch (kind) {
    case ProfileKind::uniform_step:
      return DensityProfile::uniform(left, right, value);
    case ProfileKind::two_step: {
      if (steps.empty()) throw ConfigError("two-step profile needs at least one step");
      std::vector<double> b{steps.front()[0]};
      std::vector<double> r;
      for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        if (i > 0) {
          if (s[0] < b.back()) throw ConfigError("two-step intervals must be ordered and disjoint");
          if (s[0] > b.back()) {
            r.push_back(0.0);
            b.push_back(s[0]);
          }
        }
        r.push_back(s[2]);
        b.push_back(s[1]);
      }
      return DensityProfile(std::move(b), std::move(r));
    }
    case ProfileKind::parabola: {
      if (cells == 0) throw ConfigError("parabola profile needs cells >= 1");
      if (!(half_width > 0.0)) throw ConfigError("parabola needs half_width > 0");
      const double lo = center - half_width;
      const double h = 2.0 * half_width / static_cast<double>(cells);
      std::vector<double> b(cells + 1), r(cells);
      for (std::size_t j = 0; j <= cells; ++j) b[j] = lo + static_cast<double>(j) * h;
      b[cells] = center + half_width;
      // Exact average of amplitude (1 - u^2), u = (x - center) / half_width.
      auto primitive = [&](double x) {
        const double u = (x - center) / half_width;
        return half_width * (u - u * u * u / 3.0);
      };
      for (std::size_t j = 0; j < cells; ++j)
        r[j] = amplitude * (primitive(b[j + 1]) - primitive(b[j])) / (b[j + 1] - b[j]);
      return DensityProfile(std::move(b), std::move(r));
    }
    case ProfileKind::explicit_cells:
      return DensityProfile(breakpoints, values);
  }
  throw ConfigError("unknown profile kind");
}

std::vector<double> ScenarioConfig::resolved_output_times() const {
  std::vector<double> t;
  if (!output_times.empty()) {
    for (double s : output_times)
      if (s > 0.0 && s < t_end && (t.empty() || s > t.back())) t.push_back(s);
  } else if (output_interval > 0.0) {
    for (std::size_t k = 1;; ++k) {
      const double s = static_cast<double>(k) * output_interval;
      if (s >= t_end * (1.0 - 1e-12)) break;
      t.push_back(s);
    }
  }
  t.push_back(t_end);
  return t;
}

namespace {

const char* kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::uniform_step: return "uniform-step";
    case ProfileKind::two_step: return "two-step";
    case ProfileKind::parabola: return "parabola";
    case ProfileKind::explicit_cells: return "explicit";
  }
  return "?";
}

ProfileKind kind_from(const std::string& s) {
  if (s == "uniform-step") return ProfileKind::uniform_step;
  if (s == "two-step") return ProfileKind::two_step;
  if (s == "parabola") return ProfileKind::parabola;
  if (s == "explicit") return ProfileKind::explicit_cells;
  throw ConfigError("unknown profile kind '" + s + "'");
}

// The defaults block every document is overlaid on.
json defaults_json() {
  const ScenarioConfig d;
  json j = json::parse(emit_config(d).dump());
  return j;
}

json builtin_overlay(const std::string& name) {
  if (name == "single-step")
    return {{"name", name},
            {"profile", {{"kind", "uniform-step"}, {"left", -1.0}, {"right", 1.0}, {"value", 0.3}}}};
  if (name == "parabola")
    return {{"name", name},
            {"profile",
             {{"kind", "parabola"},
              {"center", 0.0},
              {"half_width", 1.0},
              {"amplitude", 0.75},
              {"cells", 10000}}}};
  if (name == "two-step-0206")
    return {{"name", name},
            {"profile",
             {{"kind", "two-step"},
              {"steps", json::array({json::array({-0.5, 0.0, 0.2}), json::array({0.5, 1.0, 0.6})})}}}};
  if (name == "two-step-11")
    return {{"name", name},
            {"profile",
             {{"kind", "two-step"},
              {"steps", json::array({json::array({-0.5, 0.0, 1.0}), json::array({0.5, 1.0, 1.0})})}}}};
  if (name == "stationary-weak")
    return {{"name", name},
            {"profile",
             {{"kind", "two-step"},
              {"steps",
               json::array({json::array({-1.0, -0.5, 1.0}), json::array({0.5, 1.0, 1.0})})}}},
            {"entropy", {{"constants", json::array({0.5})}}}};
  throw ConfigError("unknown scenario '" + name + "'");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

std::size_t get_count(const json& j, const char* key, const std::string& where) {
  const json& v = j.contains(key) ? j.at(key) : json();
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return v.get<std::size_t>();
}

ProfileSpec profile_from(const json& j) {
  const std::string w = "profile";
  if (!j.is_object()) throw ConfigError("profile must be an object");
  ProfileSpec p;
  p.kind = kind_from(get<std::string>(j, "kind", w));
  switch (p.kind) {
    case ProfileKind::uniform_step:
      p.left = get<double>(j, "left", w);
      p.right = get<double>(j, "right", w);
      p.value = get<double>(j, "value", w);
      break;
    case ProfileKind::two_step:
      p.steps = get<std::vector<std::array<double, 3>>>(j, "steps", w);
      break;
    case ProfileKind::parabola:
      p.center = get<double>(j, "center", w);
      p.half_width = get<double>(j, "half_width", w);
      p.amplitude = get<double>(j, "amplitude", w);
      p.cells = get_count(j, "cells", w);
      break;
    case ProfileKind::explicit_cells:
      p.breakpoints = get<std::vector<double>>(j, "breakpoints", w);
      p.values = get<std::vector<double>>(j, "values", w);
      break;
  }
  return p;
}

ordered_json profile_to(const ProfileSpec& p) {
  ordered_json j;
  j["kind"] = kind_name(p.kind);
  switch (p.kind) {
    case ProfileKind::uniform_step:
      j["left"] = p.left;
      j["right"] = p.right;
      j["value"] = p.value;
      break;
    case ProfileKind::two_step:
      j["steps"] = p.steps;
      break;
    case ProfileKind::parabola:
      j["center"] = p.center;
      j["half_width"] = p.half_width;
      j["amplitude"] = p.amplitude;
      j["cells"] = p.cells;
      break;
    case ProfileKind::explicit_cells:
      j["breakpoints"] = p.breakpoints;
      j["values"] = p.values;
      break;
  }
  return j;
}

ScenarioConfig config_from(const json& j) {
  check_keys(j, {"name", "scenario", "profile", "kernel", "mobility", "particles", "godunov",
                 "time", "out_dir", "entropy", "convergence"},
             "config");
  ScenarioConfig c;
  c.name = get<std::string>(j, "name", "config");
  c.out_dir = get<std::string>(j, "out_dir", "config");
  c.profile = profile_from(j.at("profile"));

  const json& k = j.at("kernel");
  check_keys(k, {"kind", "A", "B"}, "kernel");
  if (get<std::string>(k, "kind", "kernel") != "gaussian")
    throw ConfigError("only the gaussian kernel is available");
  c.kernel.amplitude = get<double>(k, "A", "kernel");
  c.kernel.inverse_width = get<double>(k, "B", "kernel");

  const json& m = j.at("mobility");
  check_keys(m, {"kind", "M", "v_max"}, "mobility");
  if (get<std::string>(m, "kind", "mobility") != "truncated-linear")
    throw ConfigError("only the truncated-linear mobility is available");
  c.mobility.max_density = get<double>(m, "M", "mobility");
  c.mobility.v_max = get<double>(m, "v_max", "mobility");

  const json& p = j.at("particles");
  check_keys(p, {"N", "rtol"}, "particles");
  c.particles = get_count(p, "N", "particles");
  c.rtol = get<double>(p, "rtol", "particles");

  const json& g = j.at("godunov");
  check_keys(g, {"cells", "left", "right", "cfl", "interface_fields"}, "godunov");
  c.grid.cells = get_count(g, "cells", "godunov");
  c.grid.left = get<double>(g, "left", "godunov");
  c.grid.right = get<double>(g, "right", "godunov");
  c.cfl = get<double>(g, "cfl", "godunov");
  c.interface_fields = get<bool>(g, "interface_fields", "godunov");

  const json& t = j.at("time");
  check_keys(t, {"t_end", "output_interval", "output_times"}, "time");
  c.t_end = get<double>(t, "t_end", "time");
  c.output_interval = get<double>(t, "output_interval", "time");
  c.output_times = get<std::vector<double>>(t, "output_times", "time");

  const json& e = j.at("entropy");
  check_keys(e, {"frozen", "source", "constants", "plateaus", "snapshot_interval",
                 "quadrature_dx", "gauss_points"},
             "entropy");
  c.entropy.frozen = get<bool>(e, "frozen", "entropy");
  const auto src = get<std::string>(e, "source", "entropy");
  if (src == "godunov")
    c.entropy.source = TrajectorySource::godunov;
  else if (src == "particles")
    c.entropy.source = TrajectorySource::particles;
  else
    throw ConfigError("entropy source must be 'godunov' or 'particles'");
  c.entropy.constants = get<std::vector<double>>(e, "constants", "entropy");
  c.entropy.plateaus = get<std::vector<double>>(e, "plateaus", "entropy");
  c.entropy.snapshot_interval = get<double>(e, "snapshot_interval", "entropy");
  c.entropy.quadrature_dx = get<double>(e, "quadrature_dx", "entropy");
  c.entropy.gauss_points = get<int>(e, "gauss_points", "entropy");

  const json& v = j.at("convergence");
  check_keys(v, {"particle_counts", "reference_cells"}, "convergence");
  c.convergence.particle_counts =
      get<std::vector<std::size_t>>(v, "particle_counts", "convergence");
  c.convergence.reference_cells = get_count(v, "reference_cells", "convergence");
  return c;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"single-step", "parabola", "two-step-0206", "two-step-11", "stationary-weak"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  return parse_config(json{{"scenario", name}});
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  json merged = defaults_json();
  if (doc.contains("scenario")) {
    if (!doc.at("scenario").is_string()) throw ConfigError("'scenario' must be a string");
    merged.merge_patch(builtin_overlay(doc.at("scenario").get<std::string>()));
  }
  json user = doc;
  user.erase("scenario");
  merged.merge_patch(user);
  ScenarioConfig c = config_from(merged);
  validate(c);
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ordered_json emit_config(const ScenarioConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["profile"] = profile_to(c.profile);
  j["kernel"] = {{"kind", "gaussian"}, {"A", c.kernel.amplitude}, {"B", c.kernel.inverse_width}};
  j["mobility"] = {{"kind", "truncated-linear"},
                   {"M", c.mobility.max_density},
                   {"v_max", c.mobility.v_max}};
  j["particles"] = {{"N", c.particles}, {"rtol", c.rtol}};
  j["godunov"] = {{"cells", c.grid.cells},
                  {"left", c.grid.left},
                  {"right", c.grid.right},
                  {"cfl", c.cfl},
                  {"interface_fields", c.interface_fields}};
  j["time"] = {{"t_end", c.t_end},
               {"output_interval", c.output_interval},
               {"output_times", c.output_times}};
  j["entropy"] = {
      {"frozen", c.entropy.frozen},
      {"source", c.entropy.source == TrajectorySource::godunov ? "godunov" : "particles"},
      {"constants", c.entropy.constants},
      {"plateaus", c.entropy.plateaus},
      {"snapshot_interval", c.entropy.snapshot_interval},
      {"quadrature_dx", c.entropy.quadrature_dx},
      {"gauss_points", c.entropy.gauss_points}};
  j["convergence"] = {{"particle_counts", c.convergence.particle_counts},
                      {"reference_cells", c.convergence.reference_cells}};
  j["out_dir"] = c.out_dir;
  return j;
}

void validate(const ScenarioConfig& c) {
  if (c.particles < 1) throw ConfigError("particle count N must be >= 1");
  if (c.grid.cells < 1) throw ConfigError("cell count must be >= 1");
  if (!(c.grid.right > c.grid.left)) throw ConfigError("godunov domain needs right > left");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(c.rtol > 0.0)) throw ConfigError("rtol must be positive");
  if (!(c.cfl > 0.0 && c.cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
  if (!(c.kernel.amplitude > 0.0 && c.kernel.inverse_width > 0.0))
    throw ConfigError("kernel needs A > 0 and B > 0");
  if (!(c.mobility.max_density > 0.0 && c.mobility.v_max > 0.0))
    throw ConfigError("mobility needs M > 0 and v_max > 0");
  if (c.output_times.empty() && !(c.output_interval > 0.0))
    throw ConfigError("output_interval must be positive when no output_times are given");
  if (!(c.entropy.snapshot_interval > 0.0) || !(c.entropy.quadrature_dx > 0.0) ||
      c.entropy.gauss_points < 1)
    throw ConfigError("entropy quadrature settings must be positive");
  for (double v : c.entropy.constants)
    if (v < 0.0) throw ConfigError("entropy constants must be >= 0");
  for (double v : c.entropy.plateaus)
    if (v < 0.0) throw ConfigError("entropy plateaus must be >= 0");
  for (std::size_t n : c.convergence.particle_counts)
    if (n < 1) throw ConfigError("convergence particle counts must be >= 1");
  if (!std::is_sorted(c.convergence.particle_counts.begin(), c.convergence.particle_counts.end()))
    throw ConfigError("convergence particle counts must increase");

  DensityProfile p;
  try {
    p = c.profile.build();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("inadmissible profile: ") + e.what());
  }
  if (!(p.total_mass() > 0.0)) throw ConfigError("initial profile must have positive mass");
  for (double r : p.values())
    if (r > c.mobility.max_density) throw ConfigError("initial density exceeds M");
  if (p.support_left() < c.grid.left || p.support_right() > c.grid.right)
    throw ConfigError("godunov domain does not contain the initial support");
}

}  // namespace nlftl
