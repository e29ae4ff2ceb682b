#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "slpn/log.hpp"
#include "slpn/net.hpp"
#include "slpn/reachability.hpp"

namespace slpn {

struct ProbabilityBracket {
  /// Mass of enumerated runs ending in a target.
  double lower = 0.0;
  /// Mass still on the frontier.
  double residual = 0.0;
  std::uint64_t steps = 0;

  double upper() const noexcept { return lower + residual; }
  double width() const noexcept { return residual; }
};

struct BracketOptions {
  double epsilon = 1e-9;
  std::uint64_t max_steps = 10'000'000;
};

/// Best-first expansion of partial runs from the initial state, heaviest
/// frontier first. Runs ending in a target add to `lower`; runs ending in a
/// non-target dead end, and mass lost to missing edges, are discarded. Stops
/// when the frontier mass drops below epsilon or after max_steps expansions.
ProbabilityBracket enumerate_bracket(const Sts& sts, std::span<const StateIndex> targets,
                                     const BracketOptions& options = {});

struct PlayoutOptions {
  std::uint64_t n = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_len = 1000;
};

struct PlayoutResult {
  StochasticLog log;
  /// Traces cut off at max_len firings.
  std::uint64_t truncated = 0;
  /// Traces ending in a deadlock that is not a final marking.
  std::uint64_t stuck = 0;
};

/// Token-game play-out with std::mt19937_64 seeded by `seed`; each choice
/// draws one 53-bit uniform from the generator. Only traces reaching a final
/// marking enter the log.
PlayoutResult sample_playout(const Lsp& lsp, const PlayoutOptions& options);

}  // namespace slpn
