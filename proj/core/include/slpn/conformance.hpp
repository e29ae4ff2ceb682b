#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slpn/analysis.hpp"
#include "slpn/log.hpp"
#include "slpn/net.hpp"
#include "slpn/reachability.hpp"

namespace slpn {

struct UemscRow {
  Trace trace;
  std::uint64_t count = 0;
  double log_probability = 0.0;
  double model_probability = 0.0;
  /// max(log_probability - model_probability, 0)
  double contribution = 0.0;
};

struct UemscReport {
  double value = 1.0;
  /// One row per distinct log trace, in lexicographic trace order.
  std::vector<UemscRow> rows;
  std::size_t rg_states = 0;
  double wall_seconds = 0.0;
};

struct UemscOptions {
  AnalysisOptions analysis;
  /// Worker threads for the per-trace products; 0 picks the hardware count.
  unsigned threads = 1;
};

/// Unit Earth Movers' Stochastic Conformance: one minus the log mass in
/// excess of the model, trace by trace. The contributions are summed in row
/// order whatever the thread count.
UemscReport uemsc(const StochasticLog& log, const Sts& rg, const UemscOptions& options = {});
UemscReport uemsc(const StochasticLog& log, const Lsp& lsp, const UemscOptions& options = {},
                  Diagnostics* diagnostics = nullptr);

}  // namespace slpn
