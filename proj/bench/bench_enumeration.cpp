// Serial reference vs blocked OpenMP kernels for exact enumeration.

#include <benchmark/benchmark.h>

#include "isingdual/dynamics.hpp"
#include "isingdual/enumeration.hpp"
#include "isingdual/rng.hpp"

using namespace isingdual;

namespace {

IsingModel bench_model(int p) {
  Rng rng(17);
  Eigen::VectorXd a(p);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) a(i) = rng.uniform() - 0.5;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) b(i, j) = b(j, i) = 0.5 * (rng.uniform() - 0.5);
  return IsingModel(Domain::PlusMinusOne, a, b);
}

void BM_LogPartitionSerial(benchmark::State& state) {
  const auto m = bench_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumeration::serial::log_partition(m));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}

void BM_LogPartitionParallel(benchmark::State& state) {
  const auto m = bench_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumeration::parallel::log_partition(m));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}

void BM_MomentsSerial(benchmark::State& state) {
  const auto m = bench_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumeration::serial::moments(m, enumeration::Order::Second));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}

void BM_MomentsParallel(benchmark::State& state) {
  const auto m = bench_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumeration::parallel::moments(m, enumeration::Order::Second));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}

void BM_SimulateSynchronous(benchmark::State& state) {
  const auto m = IsingModel::fully_connected(Domain::PlusMinusOne, 10, 0.0, 0.1);
  for (auto _ : state) {
    auto c = SimulationConfig::with_defaults(m, state.range(0), UpdateRule::Synchronous, 1);
    benchmark::DoNotOptimize(simulate(c).mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_LogPartitionSerial)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogPartitionParallel)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsSerial)->DenseRange(8, 12, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->DenseRange(8, 12, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateSynchronous)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
