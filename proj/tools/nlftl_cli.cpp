// Command-line driver: particle and Godunov runs, their comparison, the
// convergence table and the entropy audit.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlftl/harness.hpp"
#include "nlftl/kernels.hpp"
#include "nlftl/metrics.hpp"

namespace {

using namespace nlftl;

enum Exit { ok = 0, failure = 1, invariant = 2, config_error = 3 };

struct Common {
  std::string config_path;
  std::string scenario;
  std::string out;
  std::optional<std::size_t> n;
  std::optional<std::size_t> cells;
  std::optional<double> t_end;
  bool frozen = false;
  bool seedless = false;
  int threads = 0;
};

ScenarioConfig resolve(const Common& o) {
  nlohmann::json doc = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file " + o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON in ") + o.config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  } else if (o.scenario.empty()) {
    throw ConfigError("give --config PATH or --scenario NAME");
  }
  if (!o.scenario.empty()) doc["scenario"] = o.scenario;
  if (!o.out.empty()) doc["out_dir"] = o.out;
  if (o.n) doc["particles"]["N"] = *o.n;
  if (o.cells) doc["godunov"]["cells"] = *o.cells;
  if (o.t_end) doc["time"]["t_end"] = *o.t_end;
  if (o.frozen) doc["entropy"]["frozen"] = true;
  return parse_config(doc);
}

void say(const std::string& s) { std::cout << s << '\n'; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_particles(const ScenarioConfig& c) {
  const auto times = c.resolved_output_times();
  const ParticleTrajectory traj = simulate_particles(c, times);
  const DensityProfile initial = c.profile.build();
  const auto dir = method_dir(c, "particles");
  write_particle_run(dir, c, traj, std::span(&initial, 1));
  say("particles: N = " + std::to_string(c.particles) + ", " +
      std::to_string(traj.accepted_steps) + " steps, min gap " + num(traj.min_gap_over_steps) +
      " (floor " + num(traj.snapshots.front().state.jammed_gap()) + ")");
  say("wrote " + dir.string());
  return ok;
}

int cmd_godunov(const ScenarioConfig& c) {
  const auto times = c.resolved_output_times();
  const FVTrajectory traj = simulate_godunov(c, times);
  const DensityProfile initial = c.profile.build();
  const auto dir = method_dir(c, "godunov");
  write_godunov_run(dir, c, traj, std::span(&initial, 1));
  say("godunov: J = " + std::to_string(c.grid.cells) + ", " + std::to_string(traj.steps) +
      " steps, mass drift " + num(traj.mass_drift()) + ", clamp warnings " +
      std::to_string(traj.clamp_warnings));
  say("wrote " + dir.string());
  return ok;
}

int cmd_compare(const ScenarioConfig& c) {
  const ComparisonReport rep = run_compare(c);
  const DensityProfile initial = c.profile.build();
  std::vector<DensityProfile> fv;
  for (const auto& s : rep.godunov.snapshots) fv.push_back(s.profile);
  write_particle_run(method_dir(c, "particles"), c, rep.particles, fv);
  write_godunov_run(method_dir(c, "godunov"), c, rep.godunov, std::span(&initial, 1));
  write_comparison(method_dir(c, "compare"), c, rep);
  say("t        L1           W1");
  for (const auto& r : rep.rows) say(num(r.t) + "  " + num(r.l1) + "  " + num(r.w1));
  return ok;
}

int cmd_converge(const ScenarioConfig& c) {
  const ConvergenceTable t =
      run_convergence(c, c.convergence.particle_counts, c.convergence.reference_cells);
  write_convergence(method_dir(c, "converge"), c, t);
  say("reference: Godunov J = " + std::to_string(t.reference_cells) + " at t = " + num(t.t_end));
  say("N      e_N          e_N/e_2N");
  for (const auto& r : t.rows)
    say(std::to_string(r.particles) + "  " + num(r.error) + "  " +
        (r.ratio ? num(*r.ratio) : std::string("-")));
  return ok;
}

int cmd_entropy(const ScenarioConfig& c) {
  const EntropyAudit a = run_entropy_audit(c);
  write_entropy_audit(method_dir(c, a.source), c, a);
  std::size_t flagged = 0;
  for (const auto& r : a.reports) flagged += r.violation;
  say("entropy audit (" + a.source + "): " + std::to_string(a.reports.size()) + " pairs, " +
      std::to_string(flagged) + " flagged");
  if (a.first_flagged_plateau) say("first flagged plateau T = " + num(*a.first_flagged_plateau));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  // --seedless is a pure marker: nothing here draws random numbers.
  for (int i = 1; i < argc; ++i)
    if (std::strncmp(argv[i], "--seedless=", 11) == 0) {
      std::cerr << "error: --seedless takes no value (the simulator has no random state)\n";
      return config_error;
    }

  CLI::App app{"Nonlocal follow-the-leader and Godunov simulator"};
  app.require_subcommand(1);
  Common o;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", o.config_path, "JSON configuration file");
    s->add_option("--scenario", o.scenario, "builtin scenario name");
    s->add_option("--out", o.out, "output root directory");
    s->add_option("--n", o.n, "particle count N");
    s->add_option("--cells", o.cells, "Godunov cell count J");
    s->add_option("--t-end", o.t_end, "final time");
    s->add_flag("--frozen", o.frozen, "entropy audit on the time-constant initial profile");
    s->add_flag("--seedless", o.seedless, "accepted for clarity; runs are always deterministic");
    s->add_option("--threads", o.threads, "OpenMP threads (results do not depend on it)");
  };

  std::string chosen;
  for (const char* name : {"particles", "godunov", "compare", "converge", "entropy-audit"}) {
    auto* s = app.add_subcommand(name, std::string("run ") + name);
    add_common(s);
    s->callback([&chosen, name] { chosen = name; });
  }
  auto* scen = app.add_subcommand("scenario", "builtin scenarios");
  scen->require_subcommand(1);
  scen->add_subcommand("list", "list builtin scenarios")->callback([&chosen] {
    chosen = "list";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    if (chosen == "list") {
      for (const auto& n : builtin_names()) {
        const ScenarioConfig c = builtin_scenario(n);
        say(n + "  mass " + num(c.profile.build().total_mass()));
      }
      return ok;
    }
    if (o.threads > 0) kernels::set_threads(o.threads);
    const ScenarioConfig c = resolve(o);
    if (chosen == "particles") return cmd_particles(c);
    if (chosen == "godunov") return cmd_godunov(c);
    if (chosen == "compare") return cmd_compare(c);
    if (chosen == "converge") return cmd_converge(c);
    if (chosen == "entropy-audit") return cmd_entropy(c);
    return failure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return invariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
}
