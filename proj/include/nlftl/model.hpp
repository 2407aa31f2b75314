#pragma once

// Mathematical objects shared by the particle and finite-volume schemes:
// mobilities, interaction kernels, piecewise-constant densities and atomic
// measures on the line.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlftl {

/// Raised when an argument lies outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a monitored invariant of a running scheme is breached.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or inadmissible scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MobilityKind { truncated_linear };

/// Speed law v(rho) = v_max * (1 - rho/M)_+ and the flux f(rho) = rho v(rho).
///
/// The law is clamped: v vanishes for every rho >= M, so a transient overshoot
/// above the cap yields zero flux instead of a negative speed.
struct Mobility {
  MobilityKind kind = MobilityKind::truncated_linear;
  double max_density = 1.0;
  double v_max = 1.0;

  double speed(double rho) const;
  /// v'(rho); the left derivative is returned at rho = M.
  double speed_derivative(double rho) const;
  double flux(double rho) const { return rho * speed(rho); }
  double flux_derivative(double rho) const;
  /// Maximiser of the (concave) flux on [0, M].
  double flux_peak() const { return 0.5 * max_density; }
  /// max |f'(u)| over u in [0, M].
  double max_flux_slope() const { return v_max; }

  bool operator==(const Mobility&) const = default;
};

enum class KernelKind { gaussian };

/// Even attractive interaction kernel K with K'(x) > 0 for x > 0.
///
/// Only the Gaussian K(x) = -A exp(-B x^2) ships; new families extend the
/// switch in the evaluators.
struct Kernel {
  KernelKind kind = KernelKind::gaussian;
  double amplitude = 1.0;      // A
  double inverse_width = 0.5;  // B

  double value(double x) const { return -amplitude * std::exp(-inverse_width * x * x); }
  double d1(double x) const {
    return 2.0 * amplitude * inverse_width * x * std::exp(-inverse_width * x * x);
  }
  double d2(double x) const {
    const double bx2 = inverse_width * x * x;
    return 2.0 * amplitude * inverse_width * (1.0 - 2.0 * bx2) * std::exp(-bx2);
  }
  /// K, K' or K'' depending on order (0, 1, 2).
  double eval(double x, int order) const;

  /// Upper bound for sup |K''| on [a, b], i.e. a Lipschitz constant of K'.
  double lipschitz_bound(double a, double b) const;

  bool operator==(const Kernel&) const = default;
};

/// The Gaussian kernel used in all numerical experiments: A = 1/sqrt(2 pi), B = 1/2.
Kernel standard_gaussian();

/// Non-negative piecewise-constant density with value r_i on [x_i, x_{i+1}).
class DensityProfile {
 public:
  DensityProfile() = default;
  DensityProfile(std::vector<double> breakpoints, std::vector<double> values);

  static DensityProfile uniform(double left, double right, double value);
  /// Zero density on [left, right]; the canonical vacuum state.
  static DensityProfile vacuum(double left = 0.0, double right = 1.0);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t cell_count() const { return values_.size(); }
  double left() const { return breakpoints_.front(); }
  double right() const { return breakpoints_.back(); }

  double total_mass() const { return cumulative_.back(); }
  /// Left end of the first cell with positive density (left() if none).
  double support_left() const;
  /// Right end of the last cell with positive density (right() if none).
  double support_right() const;

  /// Density at x, with the right-continuous cell convention.
  double value_at(double x) const;
  /// Integral of the density over (-inf, x].
  double cdf(double x) const;
  /// sup{x : cdf(x) < target} for target > 0, support_left() for target = 0.
  double cdf_inverse(double target) const;

  bool operator==(const DensityProfile& other) const {
    return breakpoints_ == other.breakpoints_ && values_ == other.values_;
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // cdf at each breakpoint
};

/// Finite sum of weighted Dirac masses at strictly increasing positions.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  AtomicMeasure(std::vector<double> atoms, std::vector<double> weights);

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  double total_mass() const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

}  // namespace nlftl
