#include "kernels_impl.hpp"

namespace nlftl::kernels::serial {

void particle_velocities(std::span<const double> x, double particle_mass, const Kernel& kernel,
                         const Mobility& mobility, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = detail::particle_velocity(static_cast<std::size_t>(i), x, particle_mass, kernel, mobility);
}

void gap_stiffness(std::span<const double> x, double particle_mass, const Kernel& kernel,
                   const Mobility& mobility, std::span<double> out) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    out[i] = detail::gap_stiffness(i, x, particle_mass, kernel, mobility);
}

void split_fields(std::span<const double> rho, const GridKernelTables& tables, double dx,
                  std::span<double> kplus, std::span<double> kminus) {
  const auto n = static_cast<std::ptrdiff_t>(rho.size());
  for (std::ptrdiff_t j = 0; j < n; ++j)
    detail::split_field_cell(static_cast<std::size_t>(j), rho, tables, dx, kplus[j], kminus[j]);
}

void split_fields_at_interfaces(std::span<const double> rho, const GridKernelTables& tables,
                                double dx, std::span<double> kplus, std::span<double> kminus) {
  const auto n = static_cast<std::ptrdiff_t>(rho.size()) - 1;
  for (std::ptrdiff_t j = 0; j < n; ++j)
    detail::split_field_interface(static_cast<std::size_t>(j), rho, tables, dx, kplus[j], kminus[j]);
}

void curvature_field(std::span<const double> rho, const GridKernelTables& tables, double dx,
                     std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(rho.size());
  for (std::ptrdiff_t j = 0; j < n; ++j)
    out[j] = detail::curvature_cell(static_cast<std::size_t>(j), rho, tables, dx);
}

void profile_convolutions(std::span<const double> points, std::span<const double> breakpoints,
                          std::span<const double> jumps, const Kernel& kernel,
                          std::span<double> conv_d1, std::span<double> conv_d2) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  for (std::ptrdiff_t q = 0; q < n; ++q)
    detail::profile_convolution_point(points[q], breakpoints, jumps, kernel, conv_d1[q], conv_d2[q]);
}

}  // namespace nlftl::kernels::serial

namespace nlftl::kernels {

GridKernelTables make_grid_tables(const Kernel& kernel, double dx, std::size_t cells) {
  GridKernelTables t;
  t.d1.resize(cells);
  t.d2.resize(cells);
  t.d1_half.resize(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    const double x = static_cast<double>(k) * dx;
    t.d1[k] = kernel.d1(x);
    t.d2[k] = kernel.d2(x);
    t.d1_half[k] = kernel.d1(x + 0.5 * dx);
  }
  return t;
}

}  // namespace nlftl::kernels
