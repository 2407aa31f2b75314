// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only=1,5,9] [--known-failures=8,12,13]
//
// Exit status is 0 when every failing criterion is in the known-failures
// list. Listed criteria still print FAIL (or XPASS if they pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlftl/harness.hpp"
#include "nlftl/kernels.hpp"
#include "nlftl/metrics.hpp"
#include "oracles.hpp"

using namespace nlftl;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
std::string g(double v) { return fmt("%.4g", v); }

// The standard runs every criterion on the builtins draws from: N = 300 to
// t = 1 with snapshots every 0.05. Computed once.
const std::map<std::string, ParticleTrajectory>& particle_runs() {
  static std::map<std::string, ParticleTrajectory> runs;
  if (runs.empty())
    for (const auto& name : builtin_names()) {
      const ScenarioConfig c = builtin_scenario(name);
      runs.emplace(name, simulate_particles(c, c.resolved_output_times()));
    }
  return runs;
}

// Criterion 1 needs per-scenario timings, so it runs the scenarios itself.
Verdict maximum_principle() {
  bool pass = true;
  std::string detail;
  for (const auto& name : builtin_names()) {
    const ScenarioConfig c = builtin_scenario(name);
    Stopwatch sw;
    const ParticleTrajectory traj = simulate_particles(c, c.resolved_output_times());
    const double secs = sw.seconds();
    const double floor = traj.snapshots.front().state.jammed_gap() - 1e-6;
    const bool ok = traj.min_gap_over_steps >= floor && secs <= 60.0;
    pass = pass && ok;
    detail += name + " gap " + g(traj.min_gap_over_steps) + ">=" + g(floor) + " in " +
              fmt("%.2fs", secs) + (ok ? "; " : " [x]; ");
  }
  return {pass, detail};
}

Verdict stationarity() {
  const Kernel k = standard_gaussian();
  const Mobility mob;
  const ParticleState s = jammed_configuration(300, 0.6, 1.0);
  double vmax = 0.0;
  for (double v : rhs(s, k, mob)) vmax = std::max(vmax, std::abs(v));
  const auto traj = integrate(s, k, mob, 1.0, {});
  double drift = 0.0;
  for (std::size_t i = 0; i < s.positions().size(); ++i)
    drift = std::max(drift, std::abs(traj.final_state().positions()[i] - s.positions()[i]));
  return {vmax <= 1e-14 && drift <= 1e-10, "max |rhs| " + g(vmax) + ", drift at t=1 " + g(drift)};
}

Verdict rhs_oracle() {
  const Kernel k = standard_gaussian();
  const Mobility mob;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> cells(1, 20);
  std::uniform_real_distribution<double> mass(0.1, 2.0);
  Stopwatch sw;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = cells(rng);
    const double pm = mass(rng) / static_cast<double>(n);
    const auto x = oracle::random_positions(rng, n + 1, 0.5 * pm, 4.0 * pm);
    std::vector<double> scale;
    const auto ref = oracle::particle_rhs(x, pm, k.amplitude, k.inverse_width, 1.0, 1.0, &scale);
    const auto got = rhs(ParticleState(0.0, x, pm, 1.0), k, mob);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (scale[i] > 0.0) worst = std::max(worst, std::abs(got[i] - ref[i]) / scale[i]);
  }
  const double secs = sw.seconds();
  return {worst <= 1e-14 && secs <= 1.0,
          "worst relative deviation " + g(worst) + " in " + fmt("%.3fs", secs)};
}

Verdict tv_bound() {
  bool pass = true;
  std::string detail;
  for (const auto& [name, traj] : particle_runs()) {
    const ScenarioConfig c = builtin_scenario(name);
    const double len = traj.snapshots.front().state.support_length();
    const double lip = c.kernel.lipschitz_bound(-len, len);
    const double tv0 = traj.snapshots.front().total_variation;
    double worst = 0.0;
    bool ok = true;
    for (const auto& s : traj.snapshots) {
      const double t = s.state.time();
      const double tv = total_variation(reconstruct_density(s.state));
      const double bound = tv0 * std::exp(4.0 * lip * c.mobility.v_max * t);
      ok = ok && std::isfinite(tv) && tv <= bound;
      if (t > 0.0) worst = std::max(worst, tv / bound);
    }
    pass = pass && ok;
    detail += name + " max TV/bound for t>0 " + g(worst) + (ok ? "; " : " [x]; ");
  }
  return {pass, detail};
}

Verdict w1_lipschitz() {
  bool pass = true;
  std::string detail;
  for (const auto& [name, traj] : particle_runs()) {
    const ScenarioConfig c = builtin_scenario(name);
    const double len = traj.snapshots.front().state.support_length();
    const double lip = c.kernel.lipschitz_bound(-len, len);
    const double m = traj.snapshots.front().state.total_mass();
    const double tol = 10.0 * c.rtol * len;
    std::vector<DensityProfile> prof;
    for (const auto& s : traj.snapshots) prof.push_back(reconstruct_density(s.state));
    double worst = 0.0;
    bool ok = true;
    for (std::size_t a = 0; a < prof.size(); ++a)
      for (std::size_t b = a + 1; b < prof.size(); ++b) {
        const double dt = traj.snapshots[b].state.time() - traj.snapshots[a].state.time();
        const double bound = 12.0 * lip * c.mobility.v_max * m * dt + 2.0 * tol;
        const double d = wasserstein1(prof[a], prof[b]);
        ok = ok && d <= bound;
        worst = std::max(worst, d / bound);
      }
    pass = pass && ok;
    detail += name + " max d1/bound " + g(worst) + (ok ? "; " : " [x]; ");
  }
  return {pass, detail};
}

Verdict empirical_gap() {
  bool pass = true;
  double worst = 0.0;
  for (const auto& [name, traj] : particle_runs())
    for (const auto& s : traj.snapshots) {
      const double d = wasserstein1(reconstruct_density(s.state), empirical_measure(s.state));
      const double bound = s.state.total_mass() * s.state.support_length() /
                           (2.0 * static_cast<double>(s.state.cells()));
      pass = pass && d <= bound + 1e-12;
      worst = std::max(worst, d / bound);
    }
  return {pass, "max d1/bound over all snapshots " + g(worst)};
}

Verdict godunov_steady_state() {
  const GodunovSolver solver(Grid{-2.5, 2.5, 1200}, standard_gaussian(), Mobility{});
  const FVState s0 = solver.sample(DensityProfile::uniform(-0.3, 0.3, 1.0));
  FVState s = s0;
  std::size_t changed_at = 0;
  for (std::size_t k = 1; k <= 10000; ++k) {
    s = solver.step(s, solver.cfl_dt(s, 1.0));
    if (changed_at == 0 && s.rho != s0.rho) changed_at = k;
  }
  const bool ok = changed_at == 0 && solver.mass(s0) > 0.0;
  return {ok, ok ? "10000 steps, state identical bit for bit, t = " + g(s.time)
                 : "state changed at step " + std::to_string(changed_at)};
}

Verdict mass_conservation() {
  double particle_worst = 0.0;
  for (const auto& [name, traj] : particle_runs()) {
    const double m = traj.snapshots.front().state.total_mass();
    for (const auto& s : traj.snapshots)
      particle_worst =
          std::max(particle_worst, std::abs(reconstruct_density(s.state).total_mass() - m));
  }
  bool pass = particle_worst <= 1e-12;
  std::string detail = "particles max |mass - m| " + g(particle_worst) + "; godunov drift/m:";
  for (const auto& name : builtin_names()) {
    const ScenarioConfig c = builtin_scenario(name);
    const FVTrajectory traj = simulate_godunov(c, {});
    const double rel = traj.mass_drift() / traj.initial_mass;
    pass = pass && rel <= 1e-6;
    detail += " " + name + " " + g(rel);
  }
  return {pass, detail + " (budget 1e-06)"};
}

Verdict long_time_pattern() {
  const ScenarioConfig c = builtin_scenario("single-step");
  const ParticleState init = init_particles(c.profile.build(), 300);
  Stopwatch sw;
  const SettleResult r = integrate_until_settled(init, c.kernel, c.mobility, 1e-6);
  const double secs = sw.seconds();
  const double d = l1_distance(reconstruct_density(r.state), DensityProfile::uniform(-0.3, 0.3, 1.0));
  return {r.settled && d <= 0.05 && secs <= 300.0,
          "settled at t = " + g(r.state.time()) + " (max speed " + g(r.max_speed) + "), L1 to " +
              "1_[-0.3,0.3] " + g(d) + " in " + fmt("%.1fs", secs)};
}

Verdict merging() {
  const ScenarioConfig c = builtin_scenario("two-step-0206");
  const ParticleState init = init_particles(c.profile.build(), 300);
  const SettleResult r = integrate_until_settled(init, c.kernel, c.mobility, 1e-6);
  const auto fwd = reconstruct_density(r.state);
  // Connected: no cell of the forward density is a gap.
  const double min_forward = *std::min_element(fwd.values().begin(), fwd.values().end());
  const auto ctr = reconstruct_density(r.state, Reconstruction::centered).values();
  double peak = 0.0;
  for (std::size_t i = 1; i + 1 < ctr.size(); ++i) peak = std::max(peak, ctr[i]);
  const double len = r.state.support_length();
  return {r.settled && min_forward > 0.5 && std::abs(len - 0.4) <= 0.02 &&
              std::abs(peak - 1.0) <= 0.02,
          "settled at t = " + g(r.state.time()) + ", support length " + g(len) +
              ", min forward density " + g(min_forward) + ", max interior density " + g(peak)};
}

Verdict entropy_violation() {
  const ScenarioConfig c = builtin_scenario("stationary-weak");
  const DensityProfile rho = c.profile.build();
  const QuadratureResolution base{c.entropy.quadrature_dx, c.entropy.gauss_points};
  const QuadratureResolution fine{0.5 * c.entropy.quadrature_dx, c.entropy.gauss_points};
  for (double t : c.entropy.plateaus) {
    if (t > 200.0) break;
    const TestFunction phi = mollifier_test_function({-0.5, 0.5}, 0.25, t);
    const auto traj = frozen_trajectory(rho, t + 1.0, c.entropy.snapshot_interval);
    const EntropyReport rep = entropy_residual(traj, c.kernel, c.mobility, phi, 0.5, base);
    if (!rep.violation) continue;
    const auto fine_traj = frozen_trajectory(rho, t + 1.0, 0.5 * c.entropy.snapshot_interval);
    const double r2 = entropy_residual_value(fine_traj, c.kernel, c.mobility, phi, 0.5, fine);
    const double change = std::abs(r2 - rep.residual) / std::abs(rep.residual);
    return {r2 < 0.0 && change <= 0.05,
            "first flag at T = " + g(t) + ": residual " + g(rep.residual) + " < -" + g(rep.guard) +
                "; doubled resolution " + g(r2) + " (change " + g(100 * change) + "%)"};
  }
  return {false, "no plateau T <= 200 flagged"};
}

Verdict escape() {
  const ScenarioConfig c = builtin_scenario("two-step-11");
  const ParticleTrajectory& traj = particle_runs().at("two-step-11");
  const ParticleState& s0 = traj.snapshots.front().state;
  const auto x = s0.positions();
  // Leading particle of the left bump: the last one before the gap.
  std::size_t lead = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (x[i + 1] - x[i] > 0.25) lead = i;
  const double speed = rhs(s0, c.kernel, c.mobility)[lead];
  const double right_mass = c.profile.build().total_mass() - c.profile.build().cdf(0.25);
  const double literal = 0.9 * c.mobility.speed(1.0) * c.kernel.d1(0.5) * right_mass;
  const double paper_style = 0.9 * c.mobility.speed(0.5) * c.kernel.d1(0.5) * right_mass;
  const DensityProfile final_fwd = reconstruct_density(traj.final_state());
  const double at_quarter = final_fwd.value_at(0.25);
  return {speed > 0.0 && speed >= literal && at_quarter >= 0.1,
          "x_" + std::to_string(lead) + "'(0) = " + g(speed) + " >= " + g(literal) +
              " (with v(1/2) instead of v(1): " + g(paper_style) + "); density at x=0.25, t=1: " +
              g(at_quarter) + " (need >= 0.1)"};
}

Verdict cross_scheme_convergence() {
  const ScenarioConfig c = builtin_scenario("single-step");
  const std::vector<std::size_t> counts{75, 150, 300, 600};
  Stopwatch sw;
  const ConvergenceTable t = run_convergence(c, counts, 2400);
  const double secs = sw.seconds();
  bool pass = secs <= 900.0;
  std::string detail;
  for (const auto& r : t.rows) {
    detail += "e_" + std::to_string(r.particles) + " " + g(r.error);
    if (r.ratio) {
      pass = pass && *r.ratio >= 1.2;
      detail += " (ratio " + fmt("%.3f", *r.ratio) + ")";
    }
    detail += "; ";
  }
  return {pass, detail + fmt("%.1fs", secs)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      files[fs::relative(e.path(), root).string()] = ss.str();
    }
  return files;
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "nlftl_acceptance_determinism";
  const int saved = kernels::max_threads();
  auto produce = [&](int threads) {
    kernels::set_threads(threads);
    fs::remove_all(root);
    for (const auto& name : builtin_names()) {
      ScenarioConfig c = builtin_scenario(name);
      c.out_dir = root.string();
      const auto times = c.resolved_output_times();
      const DensityProfile init = c.profile.build();
      write_particle_run(method_dir(c, "particles"), c, simulate_particles(c, times),
                         std::span(&init, 1));
      write_godunov_run(method_dir(c, "godunov"), c, simulate_godunov(c, times),
                        std::span(&init, 1));
    }
    return read_tree(root);
  };
  const auto a = produce(1);
  const auto b = produce(1);
  const auto c = produce(4);
  kernels::set_threads(saved);
  fs::remove_all(root);
  std::size_t bytes = 0;
  for (const auto& [k, v] : a) bytes += v.size();
  return {a == b && a == c && !a.empty(),
          std::to_string(a.size()) + " files, " + std::to_string(bytes) +
              " bytes; runs at 1, 1 and 4 threads " + (a == b && a == c ? "identical" : "differ")};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string only, known;
  app.add_option("--only", only, "comma-separated criteria to run");
  app.add_option("--known-failures", known, "comma-separated criteria expected to fail");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected = parse_list(only);
  const std::set<int> expected = parse_list(known);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"discrete maximum principle", maximum_principle},
      {"stationary particle configuration", stationarity},
      {"rhs oracle equivalence", rhs_oracle},
      {"total variation bound", tv_bound},
      {"W1 time-Lipschitz", w1_lipschitz},
      {"empirical measure gap", empirical_gap},
      {"Godunov steady state", godunov_steady_state},
      {"mass conservation", mass_conservation},
      {"long-time single step", long_time_pattern},
      {"merging of two steps", merging},
      {"entropy violation of the weak steady state", entropy_violation},
      {"escape from the non-entropic steady state", escape},
      {"cross-scheme convergence", cross_scheme_convergence},
      {"determinism", determinism},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Verdict v;
    Stopwatch sw;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const bool known_fail = expected.count(id) > 0;
    const char* tag = v.pass ? (known_fail ? "XPASS" : "PASS") : "FAIL";
    if (!v.pass && !known_fail) ++unexpected;
    std::printf("criterion %2d %-5s %s (%.1fs): %s%s\n", id, tag, criteria[i].first.c_str(),
                sw.seconds(), v.detail.c_str(), !v.pass && known_fail ? " [known failure]" : "");
    std::fflush(stdout);
  }
  std::printf("%d unexpected failure(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
