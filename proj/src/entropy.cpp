#include "nlftl/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "json.hpp"

#include "nlftl/kernels.hpp"

namespace nlftl {

double Bump::value(double x) const {
  const double u = (x - center) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  switch (shape) {
    case BumpShape::mollifier:
      return std::exp(-1.0 / (1.0 - u * u));
    case BumpShape::cosine_squared: {
      const double c = std::cos(0.5 * std::numbers::pi * u);
      return c * c;
    }
  }
  return 0.0;
}

double Bump::derivative(double x) const {
  const double u = (x - center) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  switch (shape) {
    case BumpShape::mollifier: {
      const double q = 1.0 - u * u;
      return std::exp(-1.0 / q) * (-2.0 * u / (q * q)) / half_width;
    }
    case BumpShape::cosine_squared:
      return -0.5 * std::numbers::pi * std::sin(std::numbers::pi * u) / half_width;
  }
  return 0.0;
}

double TestFunction::space(double x) const {
  double s = 0.0;
  for (const Bump& b : bumps) s += b.value(x);
  return s;
}

double TestFunction::space_dx(double x) const {
  double s = 0.0;
  for (const Bump& b : bumps) s += b.derivative(x);
  return s;
}

double TestFunction::time(double t) const {
  if (t <= plateau) return 1.0;
  const double tau = t - plateau;
  if (tau >= 1.0) return 0.0;
  return 1.0 - tau * tau * (3.0 - 2.0 * tau);
}

double TestFunction::time_dt(double t) const {
  const double tau = t - plateau;
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  return -6.0 * tau * (1.0 - tau);
}

std::vector<std::pair<double, double>> TestFunction::space_support() const {
  std::vector<std::pair<double, double>> iv;
  for (const Bump& b : bumps) iv.emplace_back(b.center - b.half_width, b.center + b.half_width);
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : iv) {
    if (!merged.empty() && p.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, p.second);
    else
      merged.push_back(p);
  }
  return merged;
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

TestFunction mollifier_test_function(std::vector<double> centers, double half_width,
                                     double plateau) {
  if (!(half_width > 0.0) || plateau < 0.0 || centers.empty())
    throw DomainError("mollifier test function needs centres, half_width > 0 and T >= 0");
  TestFunction f;
  f.id = "mollifier(";
  for (std::size_t i = 0; i < centers.size(); ++i) {
    f.bumps.push_back({BumpShape::mollifier, centers[i], half_width});
    f.id += (i ? "," : "") + format_number(centers[i]);
  }
  f.id += ";w=" + format_number(half_width) + ";T=" + format_number(plateau) + ")";
  f.plateau = plateau;
  return f;
}

TestFunction cosine_test_function(double center, double half_width, double plateau) {
  if (!(half_width > 0.0) || plateau < 0.0)
    throw DomainError("cosine test function needs half_width > 0 and T >= 0");
  TestFunction f;
  f.bumps.push_back({BumpShape::cosine_squared, center, half_width});
  f.plateau = plateau;
  f.id = "cos2(" + format_number(center) + ";w=" + format_number(half_width) +
         ";T=" + format_number(plateau) + ")";
  return f;
}

void ProfileTrajectory::push(double t, DensityProfile p) {
  if (!times.empty() && !(t > times.back()))
    throw DomainError("trajectory times must increase strictly");
  times.push_back(t);
  profiles.push_back(std::move(p));
}

ProfileTrajectory frozen_trajectory(const DensityProfile& profile, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw DomainError("frozen trajectory needs dt, t_end > 0");
  ProfileTrajectory traj;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  for (std::size_t k = 0; k <= steps; ++k)
    traj.push(static_cast<double>(k) * dt, profile);
  return traj;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("gauss_legendre needs n >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double step = legendre(x, dp) / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

namespace {

// Spatial integrals of one snapshot: A = int |rho - c| space,
// B = int sign(rho - c) [(f(rho) - f(c)) K'*rho space_x - f(c) K''*rho space].
struct SliceIntegrals {
  double a = 0.0;
  double b = 0.0;
};

SliceIntegrals slice_integrals(const DensityProfile& p, const Kernel& kernel,
                               const Mobility& mobility, const TestFunction& phi, double c,
                               const QuadratureResolution& res) {
  std::vector<double> gx, gw;
  gauss_legendre(res.gauss_points, gx, gw);

  const auto bp = p.breakpoints();
  const auto rv = p.values();

  std::vector<double> points, weights, rho;
  auto add_segment = [&](double lo, double hi, double r) {
    const double len = hi - lo;
    if (!(len > 0.0)) return;
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / res.dx - 1e-9)));
    const double h = len / static_cast<double>(pieces);
    for (std::size_t s = 0; s < pieces; ++s) {
      const double a = lo + static_cast<double>(s) * h;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        points.push_back(a + 0.5 * h * (gx[q] + 1.0));
        weights.push_back(0.5 * h * gw[q]);
        rho.push_back(r);
      }
    }
  };

  for (const auto& [lo, hi] : phi.space_support()) {
    // Pieces where rho is constant: outside the profile, or inside one cell.
    double cursor = lo;
    if (cursor < bp.front()) {
      add_segment(cursor, std::min(hi, bp.front()), 0.0);
      cursor = std::min(hi, bp.front());
    }
    auto it = std::upper_bound(bp.begin(), bp.end(), cursor);
    while (cursor < hi && it != bp.end()) {
      const auto k = static_cast<std::size_t>(it - bp.begin()) - 1;
      const double end = std::min(hi, *it);
      add_segment(cursor, end, rv[k]);
      cursor = end;
      ++it;
    }
    if (cursor < hi) add_segment(cursor, hi, 0.0);
  }

  std::vector<double> jumps(bp.size());
  for (std::size_t k = 0; k < bp.size(); ++k) {
    const double right = k < rv.size() ? rv[k] : 0.0;
    const double left = k > 0 ? rv[k - 1] : 0.0;
    jumps[k] = right - left;
  }
  std::vector<double> conv1(points.size()), conv2(points.size());
  kernels::omp::profile_convolutions(points, bp, jumps, kernel, conv1, conv2);

  const double fc = mobility.flux(c);
  SliceIntegrals out;
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double x = points[q];
    const double d = rho[q] - c;
    const double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    const double s = phi.space(x);
    out.a += weights[q] * std::abs(d) * s;
    out.b += weights[q] * sgn *
             ((mobility.flux(rho[q]) - fc) * conv1[q] * phi.space_dx(x) - fc * conv2[q] * s);
  }
  out.a *= phi.scale;
  out.b *= phi.scale;
  return out;
}

void check_trajectory(const ProfileTrajectory& traj, const TestFunction& phi, double c) {
  if (c < 0.0) throw DomainError("entropy constant c must be >= 0");
  if (traj.times.empty() || traj.times.size() != traj.profiles.size())
    throw DomainError("entropy residual needs a non-empty trajectory");
  if (traj.times.front() != 0.0) throw DomainError("trajectory must start at t = 0");
  if (traj.times.back() < phi.time_support_end() - 1e-12)
    throw DomainError("trajectory ends before the temporal support of the test function");
}

double residual_on(const ProfileTrajectory& traj, const std::vector<std::size_t>& idx,
                   const Kernel& kernel, const Mobility& mobility, const TestFunction& phi,
                   double c, const QuadratureResolution& res) {
  const double t_stop = phi.time_support_end();
  std::vector<double> integrand(idx.size(), 0.0);
  SliceIntegrals cached;
  const DensityProfile* cached_profile = nullptr;
  double initial = 0.0;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const double t = traj.times[idx[n]];
    if (n > 0 && traj.times[idx[n - 1]] >= t_stop) break;
    const DensityProfile& p = traj.profiles[idx[n]];
    if (!cached_profile || !(*cached_profile == p)) {
      cached = slice_integrals(p, kernel, mobility, phi, c, res);
      cached_profile = &p;
    }
    if (n == 0) initial = cached.a * phi.time(0.0);
    integrand[n] = cached.a * phi.time_dt(t) - cached.b * phi.time(t);
  }
  double total = initial;
  for (std::size_t n = 0; n + 1 < idx.size(); ++n) {
    const double h = traj.times[idx[n + 1]] - traj.times[idx[n]];
    total += 0.5 * h * (integrand[n] + integrand[n + 1]);
  }
  return total;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

double entropy_residual_value(const ProfileTrajectory& traj, const Kernel& kernel,
                              const Mobility& mobility, const TestFunction& phi, double c,
                              const QuadratureResolution& resolution) {
  check_trajectory(traj, phi, c);
  if (!(resolution.dx > 0.0) || resolution.gauss_points < 1)
    throw DomainError("quadrature resolution needs dx > 0 and at least one point");
  return residual_on(traj, all_indices(traj.times.size()), kernel, mobility, phi, c, resolution);
}

EntropyReport entropy_residual(const ProfileTrajectory& traj, const Kernel& kernel,
                               const Mobility& mobility, const TestFunction& phi, double c,
                               const QuadratureResolution& resolution) {
  EntropyReport rep;
  rep.c = c;
  rep.phi = phi.id;
  rep.resolution = resolution;
  rep.residual = entropy_residual_value(traj, kernel, mobility, phi, c, resolution);

  QuadratureResolution coarse = resolution;
  coarse.dx *= 2.0;
  const double r_space = residual_on(traj, all_indices(traj.times.size()), kernel, mobility, phi,
                                     c, coarse);
  double r_time = rep.residual;
  if (traj.times.size() > 2) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < traj.times.size(); i += 2) idx.push_back(i);
    if (idx.back() != traj.times.size() - 1) idx.push_back(traj.times.size() - 1);
    r_time = residual_on(traj, idx, kernel, mobility, phi, c, resolution);
  }
  rep.quadrature_error = std::abs(rep.residual - r_space) + std::abs(rep.residual - r_time);
  rep.guard = std::max(1e-6, 10.0 * rep.quadrature_error);
  rep.violation = rep.residual < -rep.guard;
  return rep;
}

std::string to_json_line(const EntropyReport& r) {
  nlohmann::ordered_json j;
  j["c"] = r.c;
  j["phi"] = r.phi;
  j["residual"] = r.residual;
  j["resolution"] = {{"dx", r.resolution.dx}, {"gauss_points", r.resolution.gauss_points}};
  j["quadrature_error"] = r.quadrature_error;
  j["guard"] = r.guard;
  j["violation"] = r.violation;
  return j.dump();
}

}  // namespace nlftl
