#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "slpn/error.hpp"
#include "slpn/net.hpp"

namespace slpn {

using StateIndex = std::uint32_t;
inline constexpr StateIndex kNoState = std::numeric_limits<StateIndex>::max();

struct StsEdge {
  StateIndex source = 0;
  TransitionIndex transition = 0;
  StateIndex target = 0;
  double probability = 0.0;
};

/// What a state stands for. Reachability graph states carry their marking;
/// product states additionally name the reachability state and DFA state
/// they pair.
struct StsState {
  Marking marking;
  StateIndex rg_state = kNoState;
  std::uint32_t dfa_state = std::numeric_limits<std::uint32_t>::max();
};

/// Finite labelled transition system with per-edge probabilities. Used both
/// for stochastic reachability graphs and for products with automata; edges
/// keep the firing transition so labels and provenance stay available.
class StochasticTransitionSystem {
 public:
  StochasticTransitionSystem() = default;
  /// Copies transition ids and labels out of `net`.
  explicit StochasticTransitionSystem(const Net& net);

  StateIndex add_state(StsState state);
  void add_edge(StsEdge edge);
  void set_initial(StateIndex s) { initial_ = s; }
  void set_final(StateIndex s, bool final = true);

  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  StateIndex initial() const noexcept { return initial_; }
  const StsState& state(StateIndex s) const { return states_.at(s); }
  bool is_final(StateIndex s) const { return final_.at(s); }
  std::vector<StateIndex> finals() const;

  const std::vector<StsEdge>& edges() const noexcept { return edges_; }
  const StsEdge& edge(std::size_t e) const { return edges_.at(e); }
  /// Edge indices leaving `s`, in insertion order.
  std::span<const std::uint32_t> outgoing(StateIndex s) const { return outgoing_.at(s); }
  double out_mass(StateIndex s) const;

  const Label& label(const StsEdge& e) const { return labels_.at(e.transition); }
  const std::string& transition_id(TransitionIndex t) const { return transition_ids_.at(t); }
  const std::vector<Label>& transition_labels() const noexcept { return labels_; }
  const std::vector<std::string>& transition_ids() const noexcept { return transition_ids_; }
  /// Registers an extra transition name (used for the sink completion).
  TransitionIndex add_transition_name(std::string id, Label label);

  /// Set by the reachability builder when the domination heuristic fired.
  bool unboundedness_suspected = false;

 private:
  std::vector<StsState> states_;
  std::vector<bool> final_;
  std::vector<StsEdge> edges_;
  std::vector<std::vector<std::uint32_t>> outgoing_;
  std::vector<std::string> transition_ids_;
  std::vector<Label> labels_;
  StateIndex initial_ = 0;
};

using Sts = StochasticTransitionSystem;

struct ReachabilityOptions {
  std::size_t max_states = 1'000'000;
};

/// Breadth-first stochastic reachability graph; the initial marking is state
/// 0. Explicit finals that are reachable but enable a transition raise Error;
/// unreachable explicit finals produce a warning. Exceeding `max_states`
/// raises StateCapError. A generated marking that strictly covers one of its
/// ancestors produces a single unboundedness warning.
Sts build_reachability_graph(const Lsp& lsp, const ReachabilityOptions& options = {},
                             Diagnostics* diagnostics = nullptr);

enum class StateClass { deadlock, livelock, live };

std::vector<StateClass> classify_states(const Sts& sts);

/// States from which some state in `targets` is reachable (targets included).
std::vector<bool> can_reach(const Sts& sts, std::span<const StateIndex> targets);

struct GraphStats {
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t finals = 0;
  std::size_t deadlocks = 0;
  std::size_t livelocks = 0;
  bool unboundedness_suspected = false;
};

GraphStats graph_stats(const Sts& sts);

/// One line per edge: `source -> target transition label probability`.
std::string to_edge_list(const Sts& sts, const Net* net = nullptr);
/// DOT-style rendering for inspection. Finals are drawn with a double circle.
std::string to_dot(const Sts& sts, const Net* net = nullptr);

}  // namespace slpn
