// Micro-benchmarks for the four violation-search strategies over random
// enumeration instances. Reported counters: oracle queries per search and
// the fraction of runs that finish with an exact certificate.

#include <benchmark/benchmark.h>

#include <slackmax/dataset.hpp>
#include <slackmax/search.hpp>

namespace {

using namespace slackmax;

void run_strategy(benchmark::State& state, SearchKind kind,
                  PointDistribution dist) {
  const auto M = static_cast<std::size_t>(state.range(0));
  SearchConfig cfg;
  cfg.stop_ratio = 1.0;
  std::uint64_t seed = 42;
  std::int64_t queries = 0;
  std::int64_t exact = 0;
  std::int64_t runs = 0;
  for (auto _ : state) {
    const auto inst = random_instance(M, dist, seed++);
    const SearchOutcome out = run_search(kind, *inst, 0.0, cfg);
    benchmark::DoNotOptimize(out.best_phi);
    queries += out.queries;
    exact += out.certificate.kind == CertificateKind::Exact ? 1 : 0;
    ++runs;
  }
  state.counters["queries"] =
      benchmark::Counter(static_cast<double>(queries) / runs);
  state.counters["exact_rate"] =
      benchmark::Counter(static_cast<double>(exact) / runs);
}

void BM_Sarawagi(benchmark::State& s) {
  run_strategy(s, SearchKind::Sarawagi, PointDistribution::Clustered);
}
void BM_BinaryUpper(benchmark::State& s) {
  run_strategy(s, SearchKind::BinaryUpper, PointDistribution::Clustered);
}
void BM_Bisecting(benchmark::State& s) {
  run_strategy(s, SearchKind::Bisecting, PointDistribution::Clustered);
}
void BM_Angular(benchmark::State& s) {
  run_strategy(s, SearchKind::Angular, PointDistribution::Clustered);
}
void BM_AngularUniform(benchmark::State& s) {
  run_strategy(s, SearchKind::Angular, PointDistribution::Uniform);
}

BENCHMARK(BM_Sarawagi)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK(BM_BinaryUpper)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Bisecting)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Angular)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK(BM_AngularUniform)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
