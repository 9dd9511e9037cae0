// Serial reference vs OpenMP batch kernels.
//
//   OMP_NUM_THREADS=8 ./build/bench/bench_batch

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ctxkit/parallel.hpp"
#include "ctxkit/scenario.hpp"

namespace {

std::vector<ctxkit::ProbabilityRecord> make_records(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> score(1e-4, 0.5);
  std::vector<ctxkit::ProbabilityRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].instance_id = "adjective:cat:dog:a:b:" + std::to_string(i);
    for (auto& pair : records[i].raw_scores) pair = {score(rng), score(rng)};
  }
  return records;
}

std::vector<ctxkit::EmpiricalModel> make_models(std::size_t n) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> eps(-1.0, 1.0);
  std::vector<ctxkit::EmpiricalModel> models;
  models.reserve(n);
  for (std::size_t i = 0; i < n; ++i) models.push_back(ctxkit::pr_prism({eps(rng), eps(rng), eps(rng)}));
  return models;
}

void BM_Classify(benchmark::State& state, ctxkit::Execution mode) {
  const auto records = make_records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ctxkit::classify_all(records, mode));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Verdict(benchmark::State& state, ctxkit::Execution mode) {
  const auto models = make_models(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ctxkit::verdict_all(models, {}, mode));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Classify, serial, ctxkit::Execution::Serial)->Arg(11052);
BENCHMARK_CAPTURE(BM_Classify, parallel, ctxkit::Execution::Parallel)->Arg(11052);
BENCHMARK_CAPTURE(BM_Verdict, serial, ctxkit::Execution::Serial)->Arg(256);
BENCHMARK_CAPTURE(BM_Verdict, parallel, ctxkit::Execution::Parallel)->Arg(256);

BENCHMARK_MAIN();
