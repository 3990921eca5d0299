#include <benchmark/benchmark.h>

#include <random>

#include "fplab/operator.hpp"

using namespace fplab;

namespace {

Mesh line_mesh(std::size_t n) {
  // 1-D mesh with ~n nodes total
  return build_mesh(1, {-1.0, 0}, {1.0, 0}, 4.0 / static_cast<double>(n), 2.0);
}

Field seeded_field(const Mesh& mesh) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field f{std::vector<double>(mesh.n_nodes()), 0.0};
  for (double& v : f.values) v = uni(rng);
  return f;
}

}  // namespace

static void BM_apply_tiled(benchmark::State& state) {
  const Mesh mesh = line_mesh(state.range(0));
  const KernelSpec kernel = make_kernel(0.5, 3.5, 1.0);
  const ApplyPlan plan = ApplyPlan::build(mesh, kernel, 0.0);
  const Field u = seeded_field(mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_L(plan, u, 3.5));
  }
  state.SetComplexityN(static_cast<int64_t>(mesh.n_nodes()));
}
BENCHMARK(BM_apply_tiled)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

static void BM_apply_naive(benchmark::State& state) {
  const Mesh mesh = line_mesh(state.range(0));
  const KernelSpec kernel = make_kernel(0.5, 3.5, 1.0);
  const Field u = seeded_field(mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_L_naive(mesh, kernel, u, 3.5, 0.0));
  }
  state.SetComplexityN(static_cast<int64_t>(mesh.n_nodes()));
}
BENCHMARK(BM_apply_naive)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared);

static void BM_plan_build(benchmark::State& state) {
  const Mesh mesh = line_mesh(state.range(0));
  const KernelSpec kernel = make_kernel(0.5, 3.5, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ApplyPlan::build(mesh, kernel, 0.0));
  }
}
BENCHMARK(BM_plan_build)->RangeMultiplier(2)->Range(256, 2048);

static void BM_energy(benchmark::State& state) {
  const Mesh mesh = line_mesh(state.range(0));
  const KernelSpec kernel = make_kernel(0.5, 3.5, 1.0);
  const ApplyPlan plan = ApplyPlan::build(mesh, kernel, 0.0);
  const Field u = seeded_field(mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy(plan, u, 3.5));
  }
}
BENCHMARK(BM_energy)->RangeMultiplier(2)->Range(256, 2048);

BENCHMARK_MAIN();
