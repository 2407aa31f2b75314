#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nlftl/metrics.hpp"
#include "nlftl/scenario.hpp"

using namespace nlftl;

TEST_CASE("builtin scenarios and their masses") {
  const std::vector<std::pair<std::string, double>> expected{{"single-step", 0.6},
                                                             {"parabola", 1.0},
                                                             {"two-step-0206", 0.4},
                                                             {"two-step-11", 1.0},
                                                             {"stationary-weak", 1.0}};
  CHECK(builtin_names().size() == expected.size());
  for (const auto& [name, mass] : expected) {
    const ScenarioConfig c = builtin_scenario(name);
    CHECK(c.name == name);
    CHECK(std::abs(c.profile.build().total_mass() - mass) <= 1e-10);
    CHECK(c.particles == 300);
    CHECK(c.grid.cells == 1200);
    CHECK_NOTHROW(validate(c));
  }
  const auto two = builtin_scenario("two-step-0206").profile.build();
  CHECK(two.value_at(-0.25) == 0.2);
  CHECK(two.value_at(0.25) == 0.0);
  CHECK(two.value_at(0.75) == 0.6);
  CHECK(builtin_scenario("stationary-weak").entropy.constants == std::vector<double>{0.5});
  CHECK_THROWS_AS(builtin_scenario("no-such"), ConfigError);
}

TEST_CASE("parabola cells average the exact profile") {
  const auto p = builtin_scenario("parabola").profile.build();
  CHECK(p.cell_count() == 10000);
  CHECK(p.left() == -1.0);
  CHECK(p.right() == 1.0);
  for (double r : p.values()) CHECK((r > 0.0 && r <= 0.75));
  CHECK(p.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("config round trip") {
  for (const auto& name : builtin_names()) {
    const ScenarioConfig c = builtin_scenario(name);
    CHECK(parse_config(nlohmann::json::parse(emit_config(c).dump())) == c);
  }
  ScenarioConfig c;
  c.name = "mine";
  c.profile.kind = ProfileKind::explicit_cells;
  c.profile.breakpoints = {-0.4, 0.1, 0.3};
  c.profile.values = {0.5, 0.9};
  c.kernel.amplitude = 0.7;
  c.mobility.v_max = 2.0;
  c.particles = 64;
  c.grid = Grid{-3.0, 3.0, 500};
  c.interface_fields = true;
  c.t_end = 2.5;
  c.output_times = {0.5, 1.5};
  c.entropy.frozen = true;
  c.entropy.source = TrajectorySource::particles;
  c.entropy.constants = {0.2, 0.4};
  c.convergence.particle_counts = {10, 20};
  c.convergence.reference_cells = 200;
  CHECK(parse_config_text(emit_config(c).dump(2)) == c);
}

TEST_CASE("documents overlay the named builtin") {
  const auto c = parse_config_text(R"({"scenario": "two-step-11", "particles": {"N": 50}})");
  CHECK(c.name == "two-step-11");
  CHECK(c.particles == 50);
  CHECK(c.profile == builtin_scenario("two-step-11").profile);
  const auto d = parse_config_text(R"({"time": {"t_end": 0.5}})");
  CHECK(d.name == "custom");
  CHECK(d.t_end == 0.5);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config_text("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"scenario": "nope"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"particles": {"N": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"particles": {"N": -3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"time": {"t_end": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"profile": {"kind": "uniform-step", "value": 1.5}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"profile": {"kind": "uniform-step", "value": -0.1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"profile": {"kind": "uniform-step", "value": 0.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"godunov": {"left": -0.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"godunov": {"cfl": 1.2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"kernel": {"kind": "morse"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"entropy": {"source": "oracle"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"convergence": {"particle_counts": [20, 10]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"profile": {"kind": "zigzag"}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("load_config reads a file") {
  const auto path = std::filesystem::temp_directory_path() / "nlftl_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"scenario": "parabola", "out_dir": "elsewhere"})";
  }
  const auto c = load_config(path.string());
  CHECK(c.name == "parabola");
  CHECK(c.out_dir == "elsewhere");
  std::filesystem::remove(path);
}

TEST_CASE("output times") {
  ScenarioConfig c;
  const auto t = c.resolved_output_times();
  CHECK(t.size() == 20);
  CHECK(t.front() == 0.05);
  CHECK(t.back() == 1.0);
  c.output_times = {0.7, 0.2, 0.2, 3.0};
  c.t_end = 2.0;
  CHECK(c.resolved_output_times() == std::vector<double>{0.7, 2.0});
  c.output_times = {0.2, 0.9};
  CHECK(c.resolved_output_times() == std::vector<double>{0.2, 0.9, 2.0});
}
