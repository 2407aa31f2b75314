#pragma once

// Data-parallel inner loops of both schemes.
//
// Every routine exists twice with identical signatures: `serial::` is the
// reference loop kept for testing, `omp::` distributes the outer index over
// OpenMP threads. Each output element is produced by the same per-element
// routine with a fixed summation order, so the two variants agree bit for bit
// at any thread count.

#include <span>
#include <vector>

#include "nlftl/model.hpp"

namespace nlftl::kernels {

/// Tabulated K' and K'' on a uniform grid of spacing dx.
struct GridKernelTables {
  std::vector<double> d1;       // K'(k dx)
  std::vector<double> d2;       // K''(k dx)
  std::vector<double> d1_half;  // K'((k + 1/2) dx)
};

GridKernelTables make_grid_tables(const Kernel& kernel, double dx, std::size_t cells);

namespace serial {

/// Velocities of the nonlocal follow-the-leader system. Positions must be
/// strictly increasing; the caller checks this.
void particle_velocities(std::span<const double> x, double particle_mass, const Kernel& kernel,
                         const Mobility& mobility, std::span<double> out);

/// Per-gap stiffness of the particle system: sensitivity of the two adjacent
/// velocities to that gap. Its maximum bounds the Jacobian spectrum.
void gap_stiffness(std::span<const double> x, double particle_mass, const Kernel& kernel,
                   const Mobility& mobility, std::span<double> out);

/// K+ (mass at or left of the cell) and K- (mass right of it) at cell centres.
void split_fields(std::span<const double> rho, const GridKernelTables& tables, double dx,
                  std::span<double> kplus, std::span<double> kminus);

/// K+ and K- at the interior interfaces x_{j+1/2}, j = 0..J-2.
void split_fields_at_interfaces(std::span<const double> rho, const GridKernelTables& tables,
                                double dx, std::span<double> kplus, std::span<double> kminus);

/// Midpoint-rule (K'' * rho) at cell centres.
void curvature_field(std::span<const double> rho, const GridKernelTables& tables, double dx,
                     std::span<double> out);

/// (K' * rho)(p) and (K'' * rho)(p) for a piecewise-constant density given by
/// its breakpoints and the jumps r_k - r_{k-1} across them.
void profile_convolutions(std::span<const double> points, std::span<const double> breakpoints,
                          std::span<const double> jumps, const Kernel& kernel,
                          std::span<double> conv_d1, std::span<double> conv_d2);

}  // namespace serial

namespace omp {

void particle_velocities(std::span<const double> x, double particle_mass, const Kernel& kernel,
                         const Mobility& mobility, std::span<double> out);
void gap_stiffness(std::span<const double> x, double particle_mass, const Kernel& kernel,
                   const Mobility& mobility, std::span<double> out);
void split_fields(std::span<const double> rho, const GridKernelTables& tables, double dx,
                  std::span<double> kplus, std::span<double> kminus);
void split_fields_at_interfaces(std::span<const double> rho, const GridKernelTables& tables,
                                double dx, std::span<double> kplus, std::span<double> kminus);
void curvature_field(std::span<const double> rho, const GridKernelTables& tables, double dx,
                     std::span<double> out);
void profile_convolutions(std::span<const double> points, std::span<const double> breakpoints,
                          std::span<const double> jumps, const Kernel& kernel,
                          std::span<double> conv_d1, std::span<double> conv_d2);

}  // namespace omp

int max_threads();
void set_threads(int n);

}  // namespace nlftl::kernels
