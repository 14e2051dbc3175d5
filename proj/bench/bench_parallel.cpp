// Serial reference implementations against their OpenMP drivers.

#include <benchmark/benchmark.h>

#include <map>

#include "sgo/convergence.hpp"
#include "sgo/operators.hpp"
#include "sgo/sgoals.hpp"

namespace {

const sgo::OptimizationProblem& onemax(std::size_t len) {
  static std::map<std::size_t, sgo::OptimizationProblem> cache;
  auto it = cache.find(len);
  if (it == cache.end()) {
    it = cache
             .emplace(len, sgo::OptimizationProblem(
                               "onemax-min", sgo::SearchSpace::bitstring(len),
                               [](const sgo::Individual& x) {
                                 double z = 0;
                                 for (std::size_t k = 0; k < x.size(); ++k) z += x[k] == 0.0;
                                 return z;
                               },
                               0.0))
             .first;
  }
  return it->second;
}

sgo::Kernel ssga(std::size_t len) {
  return sgo::make_algorithm_kernel({sgo::Algorithm::ssga, 4, 0, {}, 0}, onemax(len));
}

void BM_SuccessCurveSerial(benchmark::State& state) {
  const auto& prob = onemax(8);
  const auto k = ssga(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgo::serial::estimate_success_curve(
        k, sgo::uniform_initializer(prob.space(), 4), prob, 1.0, 30, state.range(0), 1));
  }
}

void BM_SuccessCurveParallel(benchmark::State& state) {
  const auto& prob = onemax(8);
  const auto k = ssga(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sgo::estimate_success_curve(k, sgo::uniform_initializer(prob.space(), 4), prob, 1.0, 30, state.range(0), 1));
  }
}

void BM_ExactMatrixSerial(benchmark::State& state) {
  const auto& prob = onemax(state.range(0));
  const auto k = sgo::hc_kernel(sgo::bit_flip_kernel(state.range(0), 0.25), false, prob);
  for (auto _ : state) benchmark::DoNotOptimize(sgo::serial::exact_matrix(k, prob.space()));
}

void BM_ExactMatrixParallel(benchmark::State& state) {
  const auto& prob = onemax(state.range(0));
  const auto k = sgo::hc_kernel(sgo::bit_flip_kernel(state.range(0), 0.25), false, prob);
  for (auto _ : state) benchmark::DoNotOptimize(sgo::exact_matrix(k, prob.space()));
}

void BM_ElitismSerial(benchmark::State& state) {
  const auto& prob = onemax(8);
  const auto k = ssga(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sgo::serial::check_elitist(k, sgo::uniform_initializer(prob.space(), 4), prob, state.range(0), 2));
  }
}

void BM_ElitismParallel(benchmark::State& state) {
  const auto& prob = onemax(8);
  const auto k = ssga(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgo::check_elitist(k, sgo::uniform_initializer(prob.space(), 4), prob, state.range(0), 2));
  }
}

}  // namespace

BENCHMARK(BM_SuccessCurveSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuccessCurveParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactMatrixSerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactMatrixParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ElitismSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ElitismParallel)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
