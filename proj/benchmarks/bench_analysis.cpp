#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "slpn/analysis.hpp"
#include "slpn/conformance.hpp"
#include "slpn/markov.hpp"
#include "slpn/oracle.hpp"
#include "slpn/probdeclare.hpp"

namespace {

using namespace slpn;

std::string data(const std::string& name) {
  std::ifstream in(std::string(SLPN_BENCH_DATA_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// A token walking a ring of n places, leaving through an exit at each place.
Lsp ring(int n) {
  std::ostringstream out;
  for (int i = 0; i < n; ++i) out << "place p" << i << "\n";
  out << "place done\n";
  for (int i = 0; i < n; ++i) {
    out << "transition s" << i << " timed 3 a\n";
    out << "transition x" << i << " timed 1 b\n";
    out << "arc p" << i << " s" << i << "\narc s" << i << " p" << (i + 1) % n << "\n";
    out << "arc p" << i << " x" << i << "\narc x" << i << " done\n";
  }
  out << "initial p0\n";
  return parse_slpn(out.str());
}

void BM_ReachabilityOrder(benchmark::State& state) {
  auto lsp = parse_slpn(data("order.slpn"));
  for (auto _ : state) benchmark::DoNotOptimize(build_reachability_graph(lsp));
}
BENCHMARK(BM_ReachabilityOrder);

void BM_TraceProbabilityOrder(benchmark::State& state) {
  auto rg = build_reachability_graph(parse_slpn(data("order.slpn")));
  Trace trace{"open", "finalize", "ack accept", "finalize", "ack reject"};
  for (auto _ : state) benchmark::DoNotOptimize(trace_probability(rg, trace));
}
BENCHMARK(BM_TraceProbabilityOrder);

void BM_ComplianceOrder(benchmark::State& state) {
  auto lsp = parse_slpn(data("order.slpn"));
  auto spec = parse_probdeclare(data("order.pdecl"), SLPN_BENCH_DATA_DIR);
  for (auto _ : state) benchmark::DoNotOptimize(check_compliance(lsp, spec));
}
BENCHMARK(BM_ComplianceOrder);

void BM_Uemsc(benchmark::State& state) {
  auto lsp = parse_slpn(data("order.slpn"));
  auto log = sample_playout(lsp, PlayoutOptions{1000, 0, 1000}).log;
  UemscOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(uemsc(log, lsp, options));
}
BENCHMARK(BM_Uemsc)->Arg(1)->Arg(4);

void BM_SolveRing(benchmark::State& state) {
  auto rg = build_reachability_graph(ring(static_cast<int>(state.range(0))));
  auto finals = rg.finals();
  SolveOptions options;
  if (state.range(1) == 0) options.dense_limit = 0;
  for (auto _ : state) benchmark::DoNotOptimize(state_values(rg, finals, options));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveRing)->ArgsProduct({{100, 500, 1500}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_SamplePlayout(benchmark::State& state) {
  auto lsp = parse_slpn(data("order.slpn"));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_playout(lsp, PlayoutOptions{1000, seed++, 1000}));
}
BENCHMARK(BM_SamplePlayout);

void BM_BracketFig1a(benchmark::State& state) {
  auto rg = build_reachability_graph(parse_slpn(data("fig1a.slpn")));
  auto prod = product(rg, silence(trace_dfa({"a", "b"})));
  auto finals = prod.finals();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_bracket(prod, finals, BracketOptions{1e-7, 10'000'000}));
}
BENCHMARK(BM_BracketFig1a);

}  // namespace

BENCHMARK_MAIN();
