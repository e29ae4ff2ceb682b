#pragma once

#include <cstddef>
#include <optional>

#include "slpn/automata.hpp"
#include "slpn/error.hpp"
#include "slpn/markov.hpp"
#include "slpn/net.hpp"
#include "slpn/oracle.hpp"
#include "slpn/reachability.hpp"

namespace slpn {

struct AnalysisOptions {
  ReachabilityOptions reachability;
  SolveOptions solve;
  /// Attach an enumeration bracket to every result.
  bool oracle = false;
  BracketOptions bracket;
};

struct AnalysisResult {
  double value = 0.0;
  std::size_t rg_states = 0;
  std::size_t product_states = 0;
  double residual = 0.0;
  double wall_seconds = 0.0;
  std::optional<ProbabilityBracket> bracket;
};

/// Probability that the LSP produces a trace accepted by `dfa`. An
/// unsilenced automaton is silenced first; a silenced one is used as is.
AnalysisResult spec_probability(const Lsp& lsp, const Dfa& dfa,
                                const AnalysisOptions& options = {},
                                Diagnostics* diagnostics = nullptr);
/// Same, over an already built reachability graph.
AnalysisResult spec_probability(const Sts& rg, const Dfa& dfa,
                                const AnalysisOptions& options = {},
                                Diagnostics* diagnostics = nullptr);

AnalysisResult trace_probability(const Lsp& lsp, const Trace& trace,
                                 const AnalysisOptions& options = {},
                                 Diagnostics* diagnostics = nullptr);
AnalysisResult trace_probability(const Sts& rg, const Trace& trace,
                                 const AnalysisOptions& options = {});

/// Probability of reaching any final marking.
AnalysisResult language_mass(const Lsp& lsp, const AnalysisOptions& options = {},
                             Diagnostics* diagnostics = nullptr);
AnalysisResult language_mass(const Sts& rg, const AnalysisOptions& options = {});

}  // namespace slpn
