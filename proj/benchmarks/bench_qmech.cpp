#include <benchmark/benchmark.h>

#include "qmech/allocations.hpp"
#include "qmech/polytope.hpp"
#include "qmech/random_instances.hpp"
#include "qmech/workcurve.hpp"

namespace {

std::vector<qmech::Instance> sample(std::size_t count, std::size_t machines, std::size_t jobs) {
  qmech::InstanceSampler sampler(42);
  qmech::SampleOptions options;
  options.min_machines = options.max_machines = machines;
  options.min_jobs = options.max_jobs = jobs;
  std::vector<qmech::Instance> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.instance(options));
  return out;
}

void BM_LptStar(benchmark::State& state) {
  const auto instances = sample(64, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qmech::lpt_star(instances[k++ % instances.size()]));
}
BENCHMARK(BM_LptStar)->Args({4, 8})->Args({16, 64});

void BM_OptMakespan(benchmark::State& state) {
  const auto instances = sample(16, 3, static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qmech::opt_makespan(instances[k++ % instances.size()]));
}
BENCHMARK(BM_OptMakespan)->Arg(6)->Arg(9);

void BM_BuildWorkcurve(benchmark::State& state) {
  const qmech::Rationals others{8};
  const qmech::Rationals jobs{2, 1};
  for (auto _ : state) benchmark::DoNotOptimize(qmech::build_workcurve(qmech::rules::lpt_star(), others, jobs, 32));
}
BENCHMARK(BM_BuildWorkcurve);

void BM_PaymentPolytope(benchmark::State& state) {
  qmech::Rationals grid;
  for (std::int64_t k = 1; k <= state.range(0); ++k) grid.push_back(k);
  const qmech::Rationals jobs{2, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qmech::payment_polytope_feasible(qmech::rules::vcg(), grid, jobs));
  }
}
BENCHMARK(BM_PaymentPolytope)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
