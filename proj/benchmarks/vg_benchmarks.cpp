#include <benchmark/benchmark.h>

#include <random>

#include "vg/harness.hpp"
#include "vg/query.hpp"
#include "vg/repack.hpp"
#include "vg/scenario.hpp"
#include "vg/version_set.hpp"

using namespace vg;

namespace {

// Members of a set over [0, n) made of runs of the given mean length.
std::vector<VersionSeq> runs_of(std::size_t n, std::size_t run, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<VersionSeq> out;
  bool on = true;
  for (VersionSeq v = 0; v < n;) {
    std::size_t len = 1 + std::uniform_int_distribution<std::size_t>(0, 2 * run)(rng);
    for (std::size_t i = 0; i < len && v < n; ++i, ++v) {
      if (on) out.push_back(v);
    }
    on = !on;
  }
  return out;
}

template <class S>
void BM_Intersect(benchmark::State& state) {
  auto a = S::from_members(runs_of(4096, static_cast<std::size_t>(state.range(0)), 1));
  auto b = S::from_members(runs_of(4096, static_cast<std::size_t>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(a.intersect(b));
  state.counters["scalar_cost"] = static_cast<double>(a.scalar_cost());
}
BENCHMARK(BM_Intersect<ExtensionSet>)->Arg(1)->Arg(16)->Arg(256);
BENCHMARK(BM_Intersect<IntervalSet>)->Arg(1)->Arg(16)->Arg(256);

template <class S>
void BM_Unite(benchmark::State& state) {
  auto a = S::from_members(runs_of(4096, static_cast<std::size_t>(state.range(0)), 3));
  auto b = S::from_members(runs_of(4096, static_cast<std::size_t>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(a.unite(b));
}
BENCHMARK(BM_Unite<ExtensionSet>)->Arg(1)->Arg(16)->Arg(256);
BENCHMARK(BM_Unite<IntervalSet>)->Arg(1)->Arg(16)->Arg(256);

template <class S>
void BM_Contains(benchmark::State& state) {
  auto a = S::from_members(runs_of(4096, static_cast<std::size_t>(state.range(0)), 5));
  VersionSeq v = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.contains(v));
    v = (v + 97) % 4096;
  }
}
BENCHMARK(BM_Contains<ExtensionSet>)->Arg(1)->Arg(256);
BENCHMARK(BM_Contains<IntervalSet>)->Arg(1)->Arg(256);

bench::ScenarioParams city(std::size_t versions, double branch_prob) {
  bench::ScenarioParams p;
  p.buildings = 200;
  p.stations = 50;
  p.versions = versions;
  p.branch_prob = branch_prob;
  p.churn = 0.01;
  return p;
}

void BM_Generate(benchmark::State& state) {
  auto p = city(static_cast<std::size_t>(state.range(0)), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(bench::generate_repository(p));
}
BENCHMARK(BM_Generate)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_StoreMatch(benchmark::State& state) {
  auto repo = bench::generate_repository(city(100, 0.2), static_cast<Encoding>(state.range(0)));
  auto& dict = repo.store.dictionary();
  TriplePatternIds pat;
  pat.p = dict.find(Term::iri(std::string(bench::kCityNs) + "height"));
  for (auto _ : state) {
    std::size_t n = 0;
    repo.store.for_each_match(pat, [&](const Triple&, const VersionSet& vs) { n += vs.cardinality(); });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_StoreMatch)->Arg(0)->Arg(1)->ArgNames({"interval"});

void BM_Query(benchmark::State& state) {
  const auto& queries = bench::canonical_queries();
  const auto& bq = queries[static_cast<std::size_t>(state.range(0))];
  auto repo = bench::generate_repository(city(static_cast<std::size_t>(state.range(2)), 0.2),
                                         Encoding::Interval);
  auto q = query::parse_query(bq.text);
  const bool annotated = state.range(1) == 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(annotated ? query::eval_annotated(repo.store, repo.dag, q, bq.domain)
                                       : query::eval_checkout(repo.store, repo.dag, q, bq.domain));
  }
  state.SetLabel(bq.id + (annotated ? " annotated" : " checkout"));
}
BENCHMARK(BM_Query)
    ->ArgsProduct({{0, 1, 2, 3}, {0, 1}, {20, 100}})
    ->ArgNames({"query", "checkout", "versions"})
    ->Unit(benchmark::kMillisecond);

void BM_Repack(benchmark::State& state) {
  auto base = bench::generate_repository(city(100, 0.5), Encoding::Interval);
  for (auto _ : state) {
    state.PauseTiming();
    auto repo = base;
    state.ResumeTiming();
    benchmark::DoNotOptimize(repack(repo.dag, repo.store));
  }
}
BENCHMARK(BM_Repack)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
