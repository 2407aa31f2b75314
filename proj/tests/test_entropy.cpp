#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "nlftl/entropy.hpp"

using namespace nlftl;

namespace {

const Kernel gauss = standard_gaussian();
const Mobility unit_mob;

DensityProfile two_bumps() { return DensityProfile({-1.0, -0.5, 0.5, 1.0}, {1.0, 0.0, 1.0}); }

}  // namespace

TEST_CASE("test functions are non-negative with matching derivatives") {
  const auto m = mollifier_test_function({-0.5, 0.5}, 0.25, 2.0);
  const auto c = cosine_test_function(0.1, 0.3, 1.0);
  const double h = 1e-6;
  // Central differences lose an order at the C^1 kinks (cos^2 support ends,
  // ends of the time ramp), so points next to them are skipped.
  auto near_edge = [](const TestFunction& f, double x) {
    for (const auto& [lo, hi] : f.space_support())
      if (std::abs(x - lo) < 1e-3 || std::abs(x - hi) < 1e-3) return true;
    return false;
  };
  for (const TestFunction& f : {m, c}) {
    for (double t = 0.0; t <= f.time_support_end() + 0.5; t += 0.0625) {
      for (double x = -1.2; x <= 1.2; x += 0.01) {
        CHECK(f.phi(t, x) >= 0.0);
        if (near_edge(f, x)) continue;
        const double fx = (f.phi(t, x + h) - f.phi(t, x - h)) / (2 * h);
        CHECK(std::abs(fx - f.phi_x(t, x)) <= 1e-6);
      }
      const double tau = t - f.plateau;
      if (t <= h || std::abs(tau) < 1e-3 || std::abs(tau - 1.0) < 1e-3) continue;
      const double x = f.bumps.front().center + 0.05;
      const double ft = (f.phi(t + h, x) - f.phi(t - h, x)) / (2 * h);
      CHECK(std::abs(ft - f.phi_t(t, x)) <= 1e-6);
    }
    CHECK(f.time(0.0) == 1.0);
    CHECK(f.time(f.plateau) == 1.0);
    CHECK(f.time(f.time_support_end()) == 0.0);
    CHECK(f.time(f.time_support_end() + 3.0) == 0.0);
  }
  CHECK(m.phi(0.0, 0.0) == 0.0);
  CHECK(m.phi(0.0, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(c.phi(0.0, 0.1) == doctest::Approx(1.0));
  const auto sup = m.space_support();
  REQUIRE(sup.size() == 2);
  CHECK(sup[0].first == -0.75);
  CHECK(sup[1].second == 0.75);
  CHECK(cosine_test_function(0.0, 0.5, 1.0).space_support().size() == 1);
  CHECK_THROWS_AS(mollifier_test_function({}, 0.25, 1.0), DomainError);
  CHECK_THROWS_AS(cosine_test_function(0.0, -1.0, 1.0), DomainError);
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    REQUIRE(x.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg < 2 * n; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(s - exact) <= 1e-14);
    }
  }
  std::vector<double> x, w;
  CHECK_THROWS_AS(gauss_legendre(0, x, w), DomainError);
}

TEST_CASE("vacuum has zero residual") {
  const auto traj = frozen_trajectory(DensityProfile::vacuum(-2.0, 2.0), 3.0, 0.05);
  const auto phi = mollifier_test_function({-0.5, 0.5}, 0.25, 1.0);
  CHECK(entropy_residual_value(traj, gauss, unit_mob, phi, 0.0) == 0.0);
  for (double c : {0.1, 0.5, 1.0}) {
    const auto rep = entropy_residual(traj, gauss, unit_mob, phi, c);
    CHECK(std::abs(rep.residual) <= rep.guard);
    CHECK_FALSE(rep.violation);
  }
}

TEST_CASE("residual is linear in the test function scale") {
  const auto traj = frozen_trajectory(two_bumps(), 3.0, 0.05);
  auto phi = mollifier_test_function({-0.5, 0.5}, 0.25, 1.0);
  const double r1 = entropy_residual_value(traj, gauss, unit_mob, phi, 0.3);
  phi.scale = 2.5;
  const double r2 = entropy_residual_value(traj, gauss, unit_mob, phi, 0.3);
  CHECK(r2 == doctest::Approx(2.5 * r1).epsilon(1e-12));
}

TEST_CASE("the frozen two-bump state is flagged at c = 1/2") {
  const auto traj = frozen_trajectory(two_bumps(), 6.0, 0.01);
  const auto phi = mollifier_test_function({-0.5, 0.5}, 0.25, 2.0);
  const auto rep = entropy_residual(traj, gauss, unit_mob, phi, 0.5);
  CHECK(rep.residual < 0.0);
  CHECK(rep.violation);
  CHECK(rep.guard < std::abs(rep.residual));
}

TEST_CASE("entropy residual domain checks") {
  const auto phi = mollifier_test_function({0.0}, 0.25, 2.0);
  const auto short_traj = frozen_trajectory(two_bumps(), 2.5, 0.1);
  CHECK_THROWS_AS(entropy_residual(short_traj, gauss, unit_mob, phi, 0.5), DomainError);
  const auto ok = frozen_trajectory(two_bumps(), 3.0, 0.1);
  CHECK_THROWS_AS(entropy_residual(ok, gauss, unit_mob, phi, -0.1), DomainError);
  ProfileTrajectory late;
  late.push(0.5, two_bumps());
  late.push(4.0, two_bumps());
  CHECK_THROWS_AS(entropy_residual(late, gauss, unit_mob, phi, 0.5), DomainError);
  ProfileTrajectory t;
  t.push(0.0, two_bumps());
  CHECK_THROWS_AS(t.push(0.0, two_bumps()), DomainError);
  CHECK_THROWS_AS(entropy_residual(ok, gauss, unit_mob, phi, 0.5, QuadratureResolution{0.0, 3}),
                  DomainError);
}

TEST_CASE("json line") {
  const auto traj = frozen_trajectory(two_bumps(), 2.0, 0.05);
  const auto rep =
      entropy_residual(traj, gauss, unit_mob, mollifier_test_function({-0.5, 0.5}, 0.25, 1.0), 0.5);
  const std::string line = to_json_line(rep);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(line);
  for (const char* key : {"c", "phi", "residual", "resolution", "quadrature_error", "guard", "violation"})
    CHECK(j.contains(key));
  CHECK(j["c"] == 0.5);
  CHECK(j["phi"] == rep.phi);
  CHECK(j["resolution"]["gauss_points"] == 3);
}
