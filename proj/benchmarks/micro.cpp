#include <algorithm>

#include <benchmark/benchmark.h>

#include "clg/algebra.hpp"
#include "clg/bench.hpp"
#include "clg/engine.hpp"
#include "clg/jtree.hpp"
#include "clg/oracle.hpp"

namespace {

void BM_Compile(benchmark::State& state) {
  const auto net = clg::generate_network(static_cast<std::size_t>(state.range(0)), 0.5, 11);
  for (auto _ : state) benchmark::DoNotOptimize(clg::compile(net));
}
BENCHMARK(BM_Compile)->Arg(20)->Arg(40)->Arg(80);

void BM_Propagate(benchmark::State& state) {
  const auto net = clg::generate_network(30, 0.5, 12);
  const auto tree = clg::compile(net);
  const auto ev = clg::generate_evidence(net, static_cast<std::size_t>(state.range(0)), 13);
  for (auto _ : state) benchmark::DoNotOptimize(clg::propagate(tree, net, ev));
}
BENCHMARK(BM_Propagate)->Arg(0)->Arg(5)->Arg(15);

void BM_QueryAll(benchmark::State& state) {
  const auto net = clg::generate_network(30, 0.5, 12);
  const auto tree = clg::compile(net);
  const auto ev = clg::generate_evidence(net, 5, 13);
  auto s = clg::propagate(tree, net, ev);
  for (auto _ : state)
    for (clg::VariableId v = 0; v < net.size(); ++v) {
      if (ev.contains(v)) continue;
      if (net.is_discrete(v)) benchmark::DoNotOptimize(s.query_discrete(v));
      else benchmark::DoNotOptimize(s.query_continuous(v));
    }
}
BENCHMARK(BM_QueryAll);

void BM_ExchangeContinuous(benchmark::State& state) {
  const auto net = clg::generate_network(12, 1.0, 14);
  clg::Density fz, fy;
  for (const auto& spec : net.densities) {
    const auto d = clg::Density::from_spec(net, spec);
    for (const auto& e : net.densities) {
      if (std::find(e.continuous_tail.begin(), e.continuous_tail.end(), d.head) == e.continuous_tail.end()) continue;
      fz = d;
      fy = clg::Density::from_spec(net, e);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(clg::exchange_continuous(fy, fz));
}
BENCHMARK(BM_ExchangeContinuous);

void BM_OracleEnumerate(benchmark::State& state) {
  const auto net = clg::generate_network(12, 0.5, 15);
  for (auto _ : state) benchmark::DoNotOptimize(clg::enumerate_joint(net));
}
BENCHMARK(BM_OracleEnumerate);

}  // namespace

BENCHMARK_MAIN();
