#include <benchmark/benchmark.h>

#include <vector>

#include "lqk/kernel.hpp"
#include "lqk/oracle.hpp"
#include "lqk/riccati.hpp"
#include "lqk/solver.hpp"

namespace {

using namespace lqk;

/// Chain of n coupled integrators with a single input at the end.
LQProblem chain(Eigen::Index n) {
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  Matrix b = Matrix::Zero(n, 1);
  b(n - 1, 0) = 1.0;
  return LQProblem(0.0, 1.0, MatrixSchedule::constant(a), MatrixSchedule::constant(b),
                   MatrixSchedule::constant(Matrix::Identity(n, n)),
                   MatrixSchedule::constant(Matrix::Identity(1, 1)), Matrix::Identity(n, n));
}

void BM_RiccatiPair(benchmark::State& state) {
  const LQProblem p = chain(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_riccati_pair(p, 2000));
}
BENCHMARK(BM_RiccatiPair)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_KernelOperator(benchmark::State& state) {
  const LQProblem p = chain(state.range(0));
  KernelSettings settings;
  settings.steps = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(KernelOperator(p, settings));
}
BENCHMARK(BM_KernelOperator)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_KernelSection(benchmark::State& state) {
  KernelSettings settings;
  settings.steps = 2000;
  const KernelOperator op(chain(state.range(0)), settings);
  for (auto _ : state) benchmark::DoNotOptimize(op.section(0.37));
}
BENCHMARK(BM_KernelSection)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Gram(benchmark::State& state) {
  KernelSettings settings;
  settings.steps = 1000;
  const KernelOperator op(chain(4), settings);
  std::vector<double> times;
  for (int k = 0; k < state.range(0); ++k) times.push_back((k + 0.5) / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(op.gram(times));
}
BENCHMARK(BM_Gram)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SolveKernel(benchmark::State& state) {
  const LQProblem p = chain(4);
  const Vector x0 = Vector::Ones(4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_kernel(p, x0, 2000));
}
BENCHMARK(BM_SolveKernel)->Unit(benchmark::kMillisecond);

void BM_DiscreteOracle(benchmark::State& state) {
  const LQProblem p = chain(4);
  const Vector x0 = Vector::Ones(4);
  for (auto _ : state) benchmark::DoNotOptimize(discrete_value(p, x0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DiscreteOracle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
