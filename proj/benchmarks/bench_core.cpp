#include <benchmark/benchmark.h>

#include "unfitted/experiment.hpp"

using namespace unfitted;

static void BM_TessellatePNormBall(benchmark::State& state) {
  const BackgroundMesh mesh(ElementType::QuadQ1, static_cast<int>(state.range(0)));
  const ImplicitDomain domain(DomainKind::PNormBall8, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(extract_active(mesh, domain));
}
BENCHMARK(BM_TessellatePNormBall)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Stabilization(benchmark::State& state) {
  const auto type = state.range(1) == 0 ? ElementType::TriP1 : ElementType::QuadQ2;
  const Discretization d(type, static_cast<int>(state.range(0)), DomainKind::OverlapSquare, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(compute_stabilization(d.space, d.active, d.quadrature));
}
BENCHMARK(BM_Stabilization)->Args({16, 0})->Args({16, 1})->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
  const Discretization d(ElementType::QuadQ1, static_cast<int>(state.range(0)), DomainKind::PNormBall8, 1e-3);
  const auto stab = compute_stabilization(d.space, d.active, d.quadrature);
  const auto sol = ManufacturedSolution::sine();
  for (auto _ : state) benchmark::DoNotOptimize(assemble(d.space, d.quadrature, stab, sol, FormVariant{}));
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SweepPoint(benchmark::State& state) {
  ExperimentConfig c;
  c.example = Example::Ex1Tri;
  c.eps_list = {1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(run_point(c, 1e-6));
}
BENCHMARK(BM_SweepPoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
