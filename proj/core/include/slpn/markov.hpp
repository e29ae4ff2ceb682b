#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slpn/error.hpp"
#include "slpn/net.hpp"
#include "slpn/reachability.hpp"

namespace slpn {

/// Chain encoding of a transition system: labels dropped, finals absorbing.
struct MarkovChain {
  struct Edge {
    StateIndex source = 0;
    StateIndex target = 0;
    double probability = 0.0;
  };
  std::size_t state_count = 0;
  std::vector<bool> absorbing;
  std::vector<Edge> edges;
};

/// Adds a probability-one self-loop on every final state. State indices are
/// preserved.
MarkovChain embed_chain(const Sts& sts);

enum class RowKind { target, zeroed, flow };

/// One row per state. Target rows read x = 1, zeroed rows x = 0, flow rows
/// x_s = sum of p * x_t over `terms`.
struct LinearSystem {
  std::vector<RowKind> kinds;
  std::vector<std::vector<std::pair<StateIndex, double>>> terms;

  std::size_t size() const noexcept { return kinds.size(); }
};

/// Rows for `targets`: states that cannot reach any target are zeroed.
/// Parallel edges to one successor are merged.
LinearSystem assemble_system(const Sts& sts, std::span<const StateIndex> targets);

struct SolveOptions {
  double tolerance = 1e-12;
  std::size_t dense_limit = 2000;
  std::size_t max_sweeps = 1'000'000;
};

enum class SolveMethod { trivial, dense_lu, gauss_seidel };

struct Solution {
  std::vector<double> values;
  /// Infinity-norm residual of the flow rows.
  double residual = 0.0;
  SolveMethod method = SolveMethod::trivial;
  std::size_t unknowns = 0;
  std::size_t iterations = 0;
};

/// Dense LU for at most `dense_limit` flow rows, Gauss-Seidel above. Entries
/// within 1e-6 outside [0, 1] are clamped; anything further raises
/// SolverError, as does a singular matrix or non-convergence.
Solution solve_linear(const LinearSystem& system, const SolveOptions& options = {});

/// Probability, per state, of eventually reaching a state in `targets`.
/// Every target must be a final state.
Solution state_values(const Sts& sts, std::span<const StateIndex> targets,
                      const SolveOptions& options = {});

/// Value at the initial state with targets = all finals (0 without finals).
double absorbed_mass(const Sts& sts, const SolveOptions& options = {});

/// Probability that the LSP ends in one of `targets`. Targets must be final
/// markings; an unreachable target contributes 0 and is reported.
double outcome_probability(const Lsp& lsp, std::span<const Marking> targets,
                           const ReachabilityOptions& reachability = {},
                           const SolveOptions& options = {},
                           Diagnostics* diagnostics = nullptr);

/// 1 minus the outcome probability over all finals.
double livelock_mass(const Lsp& lsp, const ReachabilityOptions& reachability = {},
                     const SolveOptions& options = {});

/// Plain-text rows such as `x_3 = 0.5*x_4 + 0.5*x_7`.
std::string format_system(const LinearSystem& system);

}  // namespace slpn
