#include "slpn/analysis.hpp"

#include <chrono>

namespace slpn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

AnalysisResult absorb(const Sts& system, std::size_t rg_states,
                      const AnalysisOptions& options) {
  AnalysisResult result;
  result.rg_states = rg_states;
  result.product_states = system.state_count();
  auto finals = system.finals();
  if (!finals.empty()) {
    auto solution = state_values(system, finals, options.solve);
    result.value = solution.values[system.initial()];
    result.residual = solution.residual;
  }
  if (options.oracle) result.bracket = enumerate_bracket(system, finals, options.bracket);
  return result;
}

}  // namespace

AnalysisResult spec_probability(const Sts& rg, const Dfa& dfa, const AnalysisOptions& options,
                                Diagnostics* diagnostics) {
  auto start = Clock::now();
  auto missing = labels_outside_alphabet(rg, dfa);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    warn(diagnostics, "model labels outside the automaton alphabet: " + list);
  }
  auto sys = product(rg, dfa.silenced() ? dfa : silence(dfa));
  auto result = absorb(sys, rg.state_count(), options);
  result.wall_seconds = seconds_since(start);
  return result;
}

AnalysisResult spec_probability(const Lsp& lsp, const Dfa& dfa, const AnalysisOptions& options,
                                Diagnostics* diagnostics) {
  auto start = Clock::now();
  auto rg = build_reachability_graph(lsp, options.reachability, diagnostics);
  auto result = spec_probability(rg, dfa, options, diagnostics);
  result.wall_seconds = seconds_since(start);
  return result;
}

AnalysisResult trace_probability(const Sts& rg, const Trace& trace,
                                 const AnalysisOptions& options) {
  auto start = Clock::now();
  auto sys = product(rg, silence(trace_dfa(trace)));
  auto result = absorb(sys, rg.state_count(), options);
  result.wall_seconds = seconds_since(start);
  return result;
}

AnalysisResult trace_probability(const Lsp& lsp, const Trace& trace,
                                 const AnalysisOptions& options, Diagnostics* diagnostics) {
  auto start = Clock::now();
  auto rg = build_reachability_graph(lsp, options.reachability, diagnostics);
  auto result = trace_probability(rg, trace, options);
  result.wall_seconds = seconds_since(start);
  return result;
}

AnalysisResult language_mass(const Sts& rg, const AnalysisOptions& options) {
  auto start = Clock::now();
  auto result = absorb(rg, rg.state_count(), options);
  result.product_states = 0;
  result.wall_seconds = seconds_since(start);
  return result;
}

AnalysisResult language_mass(const Lsp& lsp, const AnalysisOptions& options,
                             Diagnostics* diagnostics) {
  auto start = Clock::now();
  auto rg = build_reachability_graph(lsp, options.reachability, diagnostics);
  auto result = language_mass(rg, options);
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace slpn
