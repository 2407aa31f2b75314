#pragma once

// Per-element routines shared by the serial and OpenMP kernel variants.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "nlftl/kernels.hpp"

namespace nlftl::kernels::detail {

/// Cascade summation of term(k) for k in [begin, end) with a fixed tree.
template <class Term>
double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
  constexpr std::size_t block = 16;
  if (end - begin <= block) {
    double s = 0.0;
    for (std::size_t k = begin; k < end; ++k) s += term(k);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

inline double particle_velocity(std::size_t i, std::span<const double> x, double pm,
                                const Kernel& kernel, const Mobility& mobility) {
  const std::size_t n = x.size() - 1;  // N, the number of cells
  const double xi = x[i];
  double v_right = 0.0;
  double v_left = 0.0;
  if (i < n) v_right = mobility.speed(pm / (x[i + 1] - xi));
  if (i > 0) v_left = mobility.speed(pm / (xi - x[i - 1]));
  const auto term = [&](std::size_t j) { return kernel.d1(xi - x[j]); };
  double acc = 0.0;
  if (v_right != 0.0) acc += v_right * pairwise_sum(i + 1, n + 1, term);
  if (v_left != 0.0) acc += v_left * pairwise_sum(0, i, term);
  return -pm * acc;
}

// Gershgorin-type bound for the gap dynamics: gap i enters the velocity of
// particle i through the cell ahead and of particle i + 1 through the cell
// behind, each with weight |dv/dgap| times the far-field sum.
inline double gap_stiffness(std::size_t i, std::span<const double> x, double pm,
                            const Kernel& kernel, const Mobility& mobility) {
  const std::size_t n = x.size() - 1;
  const double gap = x[i + 1] - x[i];
  const double r = std::min(pm / gap, mobility.max_density);
  const double dv = std::abs(mobility.speed_derivative(r)) * r / gap;
  if (dv == 0.0) return 0.0;
  const auto ahead = [&](std::size_t j) { return kernel.d1(x[i] - x[j]); };
  const auto behind = [&](std::size_t j) { return kernel.d1(x[i + 1] - x[j]); };
  const double s = std::abs(pairwise_sum(i + 1, n + 1, ahead)) + std::abs(pairwise_sum(0, i + 1, behind));
  return 2.0 * dv * pm * s;
}

inline void split_field_cell(std::size_t j, std::span<const double> rho,
                             const GridKernelTables& t, double dx, double& kp, double& km) {
  double sp = 0.0;
  for (std::size_t m = 0; m <= j; ++m) sp += t.d1[j - m] * rho[m];
  double sm = 0.0;
  for (std::size_t m = j + 1; m < rho.size(); ++m) sm -= t.d1[m - j] * rho[m];
  kp = sp * dx;
  km = sm * dx;
}

// Interface j + 1/2 lies between cells j and j + 1.
inline void split_field_interface(std::size_t j, std::span<const double> rho,
                                  const GridKernelTables& t, double dx, double& kp, double& km) {
  double sp = 0.0;
  for (std::size_t m = 0; m <= j; ++m) sp += t.d1_half[j - m] * rho[m];
  double sm = 0.0;
  for (std::size_t m = j + 1; m < rho.size(); ++m) sm -= t.d1_half[m - j - 1] * rho[m];
  kp = sp * dx;
  km = sm * dx;
}

inline double curvature_cell(std::size_t j, std::span<const double> rho,
                             const GridKernelTables& t, double dx) {
  double s = 0.0;
  for (std::size_t m = 0; m < rho.size(); ++m) s += t.d2[j > m ? j - m : m - j] * rho[m];
  return s * dx;
}

inline void profile_convolution_point(double p, std::span<const double> breakpoints,
                                      std::span<const double> jumps, const Kernel& kernel,
                                      double& c1, double& c2) {
  // rho = sum_k jump_k H(y - b_k), so (K' * rho)(p) = sum_k jump_k K(p - b_k)
  // and (K'' * rho)(p) = sum_k jump_k K'(p - b_k).
  double s1 = 0.0;
  double s2 = 0.0;
  const double a = kernel.amplitude;
  const double b = kernel.inverse_width;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (jumps[k] == 0.0) continue;
    const double d = p - breakpoints[k];
    const double e = std::exp(-b * d * d);
    s1 += jumps[k] * (-a * e);
    s2 += jumps[k] * (2.0 * a * b * d * e);
  }
  c1 = s1;
  c2 = s2;
}

}  // namespace nlftl::kernels::detail
