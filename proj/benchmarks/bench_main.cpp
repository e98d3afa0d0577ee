#include <benchmark/benchmark.h>

#include <random>

#include "gcint/antiderivatives.hpp"
#include "gcint/axioms.hpp"
#include "gcint/boundary_method.hpp"
#include "gcint/calculus.hpp"
#include "gcint/quadrature.hpp"

using namespace gcint;

static void BM_GeometricProduct(benchmark::State& state) {
  const Algebra alg(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const Multivector a = random_multivector(alg, rng);
  const Multivector b = random_multivector(alg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GeometricProduct)->DenseRange(2, 8, 2);

static void BM_VectorDerivative(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const AntiderivativeEntry e = table_entry("ax", d);
  std::mt19937_64 rng(2);
  const Multivector x = random_vector(Algebra(d), rng);
  for (auto _ : state) benchmark::DoNotOptimize(vector_derivative(e.antiderivative, e.manifold, x));
}
BENCHMARK(BM_VectorDerivative)->DenseRange(2, 4);

static void BM_DiskDirectedIntegral(benchmark::State& state) {
  const ManifoldPatch disk = disk_patch(DiskParams{}, static_cast<int>(state.range(0)));
  const VectorField one = VectorField::constant(Multivector::scalar(disk.ambient, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(directed_integral(disk, one));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_DiskDirectedIntegral)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_DiskChain(benchmark::State& state) {
  const IntegrationChain chain = disk_scenario(DiskParams{});
  for (auto _ : state) benchmark::DoNotOptimize(run_chain(chain));
}
BENCHMARK(BM_DiskChain);

static void BM_CylinderChain(benchmark::State& state) {
  const IntegrationChain chain = cylinder_scenario(CylinderParams{});
  for (auto _ : state) benchmark::DoNotOptimize(run_chain(chain));
}
BENCHMARK(BM_CylinderChain)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
