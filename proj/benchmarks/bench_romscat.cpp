// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "romscat/romscat.hpp"

using namespace romscat;

namespace {

ForwardSetup setup(int nx, int nz, int m, int n) {
  Grid2D g(nx, nz, 1.0);
  ForwardSetup s;
  s.c = Field(g, 1.0);
  s.array = ArrayGeometry::linear(g, m, nx > 1 ? 4 : 1, 1);
  s.pulse = Pulse::ricker(1.0 / 8.0);
  s.tau = s.pulse.tau_for(2.5);
  s.nsteps = 2 * n;
  return s;
}

Field box(const Grid2D& g) {
  Field q(g, 0.0);
  add_box(q, g.x(g.nx / 2) - 4, g.x(g.nx / 2) + 4, g.z(g.nz / 2) - 4, g.z(g.nz / 2) + 4, 0.2);
  return q;
}

// Leapfrog data generation on an n x n grid with 4 sensors.
void BM_ForwardData(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  ForwardModel model(setup(size, size, 4, 20));
  const Field q = box(model.grid());
  for (auto _ : state) benchmark::DoNotOptimize(model.data(q));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_ForwardData)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RomBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ForwardModel model(setup(100, 100, 4, n));
  const DataCube d = model.data(box(model.grid()));
  for (auto _ : state) benchmark::DoNotOptimize(rom_build(d, 1e-8));
}
BENCHMARK(BM_RomBuild)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BornData(benchmark::State& state) {
  Grid2D g(1, 200, 1.0);
  ForwardModel model(setup(1, 200, 1, static_cast<int>(state.range(0))));
  Field q(g, 0.0);
  add_box(q, 0, 0, 20, 30, 0.05);
  const DataCube d0 = model.data(Field(g, 0.0));
  const BornInputs in = BornInputs::from_roms(d0, rom_build(d0), rom_build(model.data(q)));
  for (auto _ : state) benchmark::DoNotOptimize(born_data(in));
}
BENCHMARK(BM_BornData)->Arg(25)->Arg(50)->Unit(benchmark::kMicrosecond);

// One finite-difference Jacobian of the ROM residual on a 1D range-hat basis.
void BM_RomJacobian(benchmark::State& state) {
  Grid2D g(1, 120, 1.0);
  ForwardModel model(setup(1, 120, 1, 40));
  const SearchBasis basis = SearchBasis::range_hats(g, range_line_depths(10.0, 60.0, model.tau()));
  const Rom rom = rom_build(model.data(box(g)));
  const ResidualFunction f = rom_residual(model, basis, rom.L);
  const Vector x = Vector::Zero(basis.size());
  const Vector r0 = f(x);
  for (auto _ : state) benchmark::DoNotOptimize(finite_difference_jacobian(f, x, r0, 1e-4));
}
BENCHMARK(BM_RomJacobian)->Unit(benchmark::kMillisecond);

void BM_SensorFunctions(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  Grid2D g(size, size, 1.0);
  const auto ops = assemble_operators(Medium::homogeneous(g, 1.0));
  const ArrayGeometry a = ArrayGeometry::linear(g, 4, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sensor_functions(ops, a, Pulse::ricker(1.0 / 8.0)));
}
BENCHMARK(BM_SensorFunctions)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
