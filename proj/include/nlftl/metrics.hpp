#pragma once

// Distances and functionals on piecewise-constant densities and atomic
// measures. Everything here is exact up to rounding: both kinds of measure
// have piecewise-linear (or step) CDFs, so every integral is closed-form on
// the merged breakpoint set.

#include "nlftl/model.hpp"

namespace nlftl {

double total_mass(const DensityProfile& profile);

/// Total variation of the compactly supported function, both boundary jumps included.
double total_variation(const DensityProfile& profile);

/// Integral of |a - b| over the line.
double l1_distance(const DensityProfile& a, const DensityProfile& b);

/// 1-Wasserstein distance as the integral of |F_a - F_b|. The two measures
/// must carry the same mass (within 1e-12 relative), otherwise DomainError.
double wasserstein1(const DensityProfile& a, const DensityProfile& b);
double wasserstein1(const DensityProfile& a, const AtomicMeasure& b);
double wasserstein1(const AtomicMeasure& a, const DensityProfile& b);
double wasserstein1(const AtomicMeasure& a, const AtomicMeasure& b);

/// W1 after rescaling both densities to the mass of `a`; used to compare
/// reconstructions whose masses differ by boundary or drift effects.
double wasserstein1_rescaled(const DensityProfile& a, const DensityProfile& b);

/// The profile with every value multiplied by `factor`.
DensityProfile scaled(const DensityProfile& profile, double factor);

}  // namespace nlftl
