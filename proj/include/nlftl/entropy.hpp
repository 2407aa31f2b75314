#pragma once

// Numerical Kruzkov entropy residual for trajectories of piecewise-constant
// densities. For a constant c >= 0 and a non-negative test function
// phi(t, x) = scale * space(x) * xi(t) the residual is
//
//   int |rho(0) - c| phi(0) dx
//     + int int |rho - c| phi_t
//              - sign(rho - c) [ (f(rho) - f(c)) (K' * rho) phi_x - f(c) (K'' * rho) phi ] dx dt
//
// with sign(0) = 0. A finite sweep over (phi, c) can only falsify
// admissibility: a residual below the guard band certifies a violation.

#include <string>
#include <vector>

#include "nlftl/model.hpp"

namespace nlftl {

enum class BumpShape {
  mollifier,       // exp(-1 / (1 - u^2)), u = (x - center) / half_width
  cosine_squared,  // cos^2(pi u / 2)
};

struct Bump {
  BumpShape shape = BumpShape::mollifier;
  double center = 0.0;
  double half_width = 0.25;

  double value(double x) const;
  double derivative(double x) const;
  bool operator==(const Bump&) const = default;
};

/// phi(t, x) = scale * (sum of bumps)(x) * xi(t), where xi is a C^1
/// non-increasing smoothstep with xi = 1 on [0, T] and xi = 0 on [T + 1, inf).
struct TestFunction {
  std::string id;
  std::vector<Bump> bumps;
  double plateau = 0.0;  // T
  double scale = 1.0;

  double space(double x) const;
  double space_dx(double x) const;
  double time(double t) const;
  double time_dt(double t) const;

  double phi(double t, double x) const { return scale * space(x) * time(t); }
  double phi_t(double t, double x) const { return scale * space(x) * time_dt(t); }
  double phi_x(double t, double x) const { return scale * space_dx(x) * time(t); }

  /// End of the temporal support, T + 1.
  double time_support_end() const { return plateau + 1.0; }
  /// Disjoint sorted intervals covering the spatial support.
  std::vector<std::pair<double, double>> space_support() const;
};

/// Mollifier bumps of half-width `half_width` at each centre; with centres
/// -1/2, 1/2 and half-width 1/4 this is the classical test function that
/// exposes the two non-admissible jumps of 1_{[-1,-1/2]} + 1_{[1/2,1]}.
TestFunction mollifier_test_function(std::vector<double> centers, double half_width,
                                     double plateau);
TestFunction cosine_test_function(double center, double half_width, double plateau);

/// Time-stamped densities; times start at 0 and increase strictly.
struct ProfileTrajectory {
  std::vector<double> times;
  std::vector<DensityProfile> profiles;

  void push(double t, DensityProfile p);
};

/// The same profile at 0, dt, 2 dt, ... up to and including t_end.
ProfileTrajectory frozen_trajectory(const DensityProfile& profile, double t_end, double dt);

struct QuadratureResolution {
  /// Longest spatial sub-cell inside one profile cell.
  double dx = 1.0 / 256.0;
  /// Gauss-Legendre points per sub-cell.
  int gauss_points = 3;

  bool operator==(const QuadratureResolution&) const = default;
};

struct EntropyReport {
  double c = 0.0;
  std::string phi;
  double residual = 0.0;
  QuadratureResolution resolution;
  /// |R - R(coarser space)| + |R - R(every other snapshot)|.
  double quadrature_error = 0.0;
  /// max(1e-6, 10 * quadrature_error).
  double guard = 0.0;
  bool violation = false;
};

/// Raw residual at one resolution.
double entropy_residual_value(const ProfileTrajectory& traj, const Kernel& kernel,
                              const Mobility& mobility, const TestFunction& phi, double c,
                              const QuadratureResolution& resolution = {});

/// Residual with an error estimate and the violation verdict. Throws
/// DomainError if the trajectory does not start at 0 or ends before T + 1.
EntropyReport entropy_residual(const ProfileTrajectory& traj, const Kernel& kernel,
                               const Mobility& mobility, const TestFunction& phi, double c,
                               const QuadratureResolution& resolution = {});

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// One JSON object per line: c, phi, residual, resolution, quadrature_error,
/// guard, violation.
std::string to_json_line(const EntropyReport& report);

}  // namespace nlftl
