#include <benchmark/benchmark.h>

#include <random>

#include "spt/assembly.hpp"
#include "spt/kernels.hpp"
#include "spt/problem.hpp"
#include "spt/solve.hpp"

using namespace spt;

namespace {

Matrix random_matrix(std::size_t n) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = d(gen);
  return a;
}

void BM_LuSerial(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::lu_factor_serial(a));
}

void BM_LuParallel(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::lu_factor_parallel(a));
}

void BM_MatvecSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n);
  const Vector x(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::matvec_serial(a, x));
}

void BM_MatvecParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n);
  const Vector x(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::matvec_parallel(a, x));
}

void BM_SolveDirect(benchmark::State& state) {
  const auto spec = catalog("ex1");
  const auto sys = assemble(spec, Mesh::single(0.0, 1.0, static_cast<int>(state.range(0))), 11);
  for (auto _ : state) benchmark::DoNotOptimize(solve_direct(sys));
}

void BM_SolveSourceIteration(benchmark::State& state) {
  const auto spec = catalog("ex1");
  const auto sys = assemble(spec, Mesh::single(0.0, 1.0, static_cast<int>(state.range(0))), 11);
  for (auto _ : state) benchmark::DoNotOptimize(solve_source_iteration(sys, 1e-12, 1000));
}

void BM_Assemble(benchmark::State& state) {
  const auto spec = catalog("ex7");
  const Mesh mesh = Mesh::single(0.0, 2.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(spec, mesh, 29));
}

}  // namespace

BENCHMARK(BM_LuSerial)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LuParallel)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecSerial)->Arg(512)->Arg(2048);
BENCHMARK(BM_MatvecParallel)->Arg(512)->Arg(2048);
BENCHMARK(BM_SolveDirect)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSourceIteration)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assemble)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
