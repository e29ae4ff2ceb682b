#include "slpn/oracle.hpp"

#include <algorithm>
#include <queue>
#include <random>

namespace slpn {

namespace {

struct FrontierEntry {
  double mass;
  std::uint64_t order;
  StateIndex state;

  bool operator<(const FrontierEntry& other) const {
    if (mass != other.mass) return mass < other.mass;
    return order > other.order;
  }
};

}  // namespace

ProbabilityBracket enumerate_bracket(const Sts& sts, std::span<const StateIndex> targets,
                                     const BracketOptions& options) {
  ProbabilityBracket bracket;
  if (sts.state_count() == 0) return bracket;
  std::vector<bool> is_target(sts.state_count(), false);
  for (auto t : targets) is_target.at(t) = true;

  // Partial runs sharing an end state are expanded together: their
  // continuations are identical, so only the summed mass matters.
  std::vector<double> pending(sts.state_count(), 0.0);
  std::vector<std::uint64_t> stamp(sts.state_count(), 0);
  std::priority_queue<FrontierEntry> heap;
  std::uint64_t order = 0;
  auto push = [&](StateIndex s, double mass) {
    pending[s] += mass;
    stamp[s] = ++order;
    heap.push({pending[s], stamp[s], s});
  };
  push(sts.initial(), 1.0);
  bracket.residual = 1.0;

  while (!heap.empty() && bracket.residual >= options.epsilon &&
         bracket.steps < options.max_steps) {
    auto top = heap.top();
    heap.pop();
    if (top.order != stamp[top.state]) continue;
    StateIndex s = top.state;
    double mass = pending[s];
    pending[s] = 0.0;
    stamp[s] = 0;
    ++bracket.steps;
    if (is_target[s]) {
      bracket.lower += mass;
      bracket.residual -= mass;
      continue;
    }
    auto out = sts.outgoing(s);
    double kept = 0.0;
    for (auto e : out) {
      const auto& edge = sts.edge(e);
      double m = mass * edge.probability;
      if (m <= 0.0) continue;
      kept += m;
      push(edge.target, m);
    }
    bracket.residual -= mass - kept;
  }
  bracket.residual = std::max(bracket.residual, 0.0);
  if (heap.empty()) bracket.residual = 0.0;
  return bracket;
}

PlayoutResult sample_playout(const Lsp& lsp, const PlayoutOptions& options) {
  PlayoutResult result;
  std::mt19937_64 gen(options.seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  const Net& net = lsp.net;
  for (std::uint64_t i = 0; i < options.n; ++i) {
    Marking m = lsp.initial;
    Trace trace;
    std::uint64_t fired = 0;
    bool finished = false;
    while (true) {
      auto en = enabled(net, m);
      if (en.empty()) {
        bool final = lsp.complete_finals ||
                     std::find(lsp.finals.begin(), lsp.finals.end(), m) != lsp.finals.end();
        if (final) {
          finished = true;
        } else {
          ++result.stuck;
        }
        break;
      }
      if (fired == options.max_len) {
        ++result.truncated;
        break;
      }
      double total = 0.0;
      for (auto t : en) total += net.transition(t).weight;
      double u = uniform() * total;
      TransitionIndex chosen = en.back();
      for (auto t : en) {
        u -= net.transition(t).weight;
        if (u < 0.0) {
          chosen = t;
          break;
        }
      }
      const auto& tr = net.transition(chosen);
      for (auto p : tr.preset) --m[p];
      for (auto p : tr.postset) ++m[p];
      if (!tr.label.is_silent()) trace.push_back(tr.label.name());
      ++fired;
    }
    if (finished) result.log.add(trace);
  }
  return result;
}

}  // namespace slpn
