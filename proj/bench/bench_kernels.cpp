// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "nlftl/godunov.hpp"
#include "nlftl/kernels.hpp"
#include "nlftl/particles.hpp"

namespace {

using namespace nlftl;

std::vector<double> positions(std::size_t n) {
  const ParticleState s = init_particles(DensityProfile::uniform(-1.0, 1.0, 0.3), n);
  return {s.positions().begin(), s.positions().end()};
}

template <bool Parallel>
void particle_velocities(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto x = positions(n);
  const double pm = 0.6 / static_cast<double>(n);
  std::vector<double> out(x.size());
  const Kernel k = standard_gaussian();
  const Mobility m;
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::omp::particle_velocities(x, pm, k, m, out);
    else
      kernels::serial::particle_velocities(x, pm, k, m, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetComplexityN(st.range(0));
}

template <bool Parallel>
void gap_stiffness(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto x = positions(n);
  const double pm = 0.6 / static_cast<double>(n);
  std::vector<double> out(x.size());
  const Kernel k = standard_gaussian();
  const Mobility m;
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::omp::gap_stiffness(x, pm, k, m, out);
    else
      kernels::serial::gap_stiffness(x, pm, k, m, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetComplexityN(st.range(0));
}

template <bool Parallel>
void split_fields(benchmark::State& st) {
  Grid g;
  g.cells = static_cast<std::size_t>(st.range(0));
  const GodunovSolver solver(g, standard_gaussian(), Mobility{});
  const FVState s = solver.sample(DensityProfile::uniform(-1.0, 1.0, 0.3));
  const auto tables = kernels::make_grid_tables(standard_gaussian(), g.dx(), g.cells);
  std::vector<double> kp(g.cells), km(g.cells);
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::omp::split_fields(s.rho, tables, g.dx(), kp, km);
    else
      kernels::serial::split_fields(s.rho, tables, g.dx(), kp, km);
    benchmark::DoNotOptimize(kp.data());
  }
  st.SetComplexityN(st.range(0));
}

}  // namespace

BENCHMARK(particle_velocities<false>)->RangeMultiplier(2)->Range(150, 2400);
BENCHMARK(particle_velocities<true>)->RangeMultiplier(2)->Range(150, 2400);
BENCHMARK(gap_stiffness<false>)->RangeMultiplier(2)->Range(150, 2400);
BENCHMARK(gap_stiffness<true>)->RangeMultiplier(2)->Range(150, 2400);
BENCHMARK(split_fields<false>)->RangeMultiplier(2)->Range(300, 4800);
BENCHMARK(split_fields<true>)->RangeMultiplier(2)->Range(300, 4800);

BENCHMARK_MAIN();
