#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slpn/analysis.hpp"
#include "slpn/automata.hpp"
#include "slpn/error.hpp"
#include "slpn/net.hpp"

namespace slpn {

enum class Comparison { eq, ne, le, ge, lt, gt };

std::string_view to_string(Comparison op);
/// Accepts `=`, `!=`, `<=`, `>=`, `<`, `>`.
Comparison parse_comparison(std::string_view text);

/// `=`, `!=`, `<=` and `>=` allow 1e-9 slack; `<` and `>` are exact.
bool holds(double value, Comparison op, double p);

struct ProbabilisticConstraint {
  std::string name;
  /// Template call or file path, kept for reporting.
  std::string formula;
  Dfa dfa;
  Comparison op = Comparison::eq;
  double probability = 1.0;
};

struct ProbDeclareSpec {
  std::set<std::string> alphabet;
  std::vector<ProbabilisticConstraint> constraints;
};

/// Template catalogue: existence, absence (one argument); response,
/// precedence, coexistence, not-coexistence, eventually-then (two distinct
/// arguments). Arguments must be in `alphabet`.
Dfa template_to_dfa(std::string_view name, const std::vector<std::string>& args,
                    const std::set<std::string>& alphabet);

/// `dfa <path>` constraints are resolved against `base_dir`.
ProbDeclareSpec parse_probdeclare(std::string_view text, const std::string& base_dir = ".");

struct ConstraintResult {
  std::string name;
  std::string formula;
  Comparison op = Comparison::eq;
  double probability = 0.0;
  double value = 0.0;
  bool holds = false;
};

struct ComplianceReport {
  std::vector<ConstraintResult> results;
  bool overall = true;
  double language_mass = 1.0;
  std::size_t rg_states = 0;
};

/// Evaluates every constraint against one shared reachability graph. Warns
/// when the LSP leaks mass into livelocks.
ComplianceReport check_compliance(const Lsp& lsp, const ProbDeclareSpec& spec,
                                  const AnalysisOptions& options = {},
                                  Diagnostics* diagnostics = nullptr);

}  // namespace slpn
