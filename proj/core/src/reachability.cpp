#include "slpn/reachability.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "slpn/text.hpp"

namespace slpn {

StochasticTransitionSystem::StochasticTransitionSystem(const Net& net) {
  transition_ids_.reserve(net.transition_count());
  labels_.reserve(net.transition_count());
  for (const auto& t : net.transitions()) {
    transition_ids_.push_back(t.id);
    labels_.push_back(t.label);
  }
}

StateIndex StochasticTransitionSystem::add_state(StsState state) {
  auto index = static_cast<StateIndex>(states_.size());
  states_.push_back(std::move(state));
  final_.push_back(false);
  outgoing_.emplace_back();
  return index;
}

void StochasticTransitionSystem::add_edge(StsEdge edge) {
  if (edge.source >= states_.size() || edge.target >= states_.size()) {
    throw Error("edge references unknown state");
  }
  outgoing_[edge.source].push_back(static_cast<std::uint32_t>(edges_.size()));
  edges_.push_back(edge);
}

void StochasticTransitionSystem::set_final(StateIndex s, bool final) {
  final_.at(s) = final;
}

std::vector<StateIndex> StochasticTransitionSystem::finals() const {
  std::vector<StateIndex> out;
  for (std::size_t s = 0; s < final_.size(); ++s) {
    if (final_[s]) out.push_back(static_cast<StateIndex>(s));
  }
  return out;
}

double StochasticTransitionSystem::out_mass(StateIndex s) const {
  double mass = 0.0;
  for (auto e : outgoing_.at(s)) mass += edges_[e].probability;
  return mass;
}

TransitionIndex StochasticTransitionSystem::add_transition_name(std::string id,
                                                                Label label) {
  transition_ids_.push_back(std::move(id));
  labels_.push_back(std::move(label));
  return static_cast<TransitionIndex>(labels_.size() - 1);
}

// ---------------------------------------------------------------------------

namespace {

struct Parent {
  StateIndex state = kNoState;
  TransitionIndex transition = 0;
};

std::vector<std::string> witness_path(const Sts& sts, const std::vector<Parent>& parents,
                                      StateIndex s) {
  std::vector<std::string> path;
  while (s != kNoState && parents[s].state != kNoState) {
    path.push_back(sts.transition_id(parents[s].transition));
    s = parents[s].state;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

Sts build_reachability_graph(const Lsp& lsp, const ReachabilityOptions& options,
                             Diagnostics* diagnostics) {
  const Net& net = lsp.net;
  if (lsp.initial.size() != net.place_count()) {
    throw Error("initial marking does not match the net's places");
  }
  Sts sts(net);
  std::unordered_map<Marking, StateIndex, MarkingHash> index;
  std::vector<Parent> parents;
  std::deque<StateIndex> queue;

  auto discover = [&](const Marking& m, Parent parent) -> StateIndex {
    if (auto it = index.find(m); it != index.end()) return it->second;
    if (sts.state_count() >= options.max_states) {
      StateIndex last = static_cast<StateIndex>(sts.state_count() - 1);
      auto path = witness_path(sts, parents, last);
      throw StateCapError(sts.state_count(), std::move(path), sts.unboundedness_suspected);
    }
    StateIndex s = sts.add_state(StsState{m});
    parents.push_back(parent);
    index.emplace(m, s);
    queue.push_back(s);
    if (!sts.unboundedness_suspected) {
      for (StateIndex a = parent.state; a != kNoState; a = parents[a].state) {
        const Marking& ancestor = sts.state(a).marking;
        if (m.dominates(ancestor) && !(m == ancestor)) {
          sts.unboundedness_suspected = true;
          auto path = witness_path(sts, parents, s);
          std::string trail;
          for (const auto& t : path) trail += (trail.empty() ? "" : " ") + t;
          warn(diagnostics, "marking " + m.to_string(net) + " strictly covers ancestor " +
                                ancestor.to_string(net) +
                                "; the net is likely unbounded (path: " + trail + ")");
          break;
        }
      }
    }
    return s;
  };

  sts.set_initial(discover(lsp.initial, Parent{}));
  while (!queue.empty()) {
    StateIndex s = queue.front();
    queue.pop_front();
    Marking m = sts.state(s).marking;
    auto en = enabled(net, m);
    double total = 0.0;
    for (auto t : en) total += net.transition(t).weight;
    for (auto t : en) {
      const auto& tr = net.transition(t);
      Marking next = m;
      for (auto p : tr.preset) --next[p];
      for (auto p : tr.postset) ++next[p];
      StateIndex target = discover(next, Parent{s, t});
      sts.add_edge(StsEdge{s, t, target, tr.weight / total});
    }
  }

  if (lsp.complete_finals) {
    for (StateIndex s = 0; s < sts.state_count(); ++s) {
      if (sts.outgoing(s).empty()) sts.set_final(s);
    }
  } else {
    for (const auto& f : lsp.finals) {
      auto it = index.find(f);
      if (it == index.end()) {
        warn(diagnostics, "final marking " + f.to_string(net) + " is unreachable");
        continue;
      }
      if (!sts.outgoing(it->second).empty()) {
        throw Error("final marking " + f.to_string(net) +
                    " is reachable but is not a deadlock");
      }
      sts.set_final(it->second);
    }
  }
  return sts;
}

std::vector<bool> can_reach(const Sts& sts, std::span<const StateIndex> targets) {
  std::vector<std::vector<StateIndex>> reverse(sts.state_count());
  for (const auto& e : sts.edges()) reverse[e.target].push_back(e.source);
  std::vector<bool> seen(sts.state_count(), false);
  std::vector<StateIndex> stack;
  for (auto t : targets) {
    if (!seen.at(t)) {
      seen[t] = true;
      stack.push_back(t);
    }
  }
  while (!stack.empty()) {
    StateIndex s = stack.back();
    stack.pop_back();
    for (auto p : reverse[s]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

std::vector<StateClass> classify_states(const Sts& sts) {
  std::vector<StateIndex> deadlocks;
  for (StateIndex s = 0; s < sts.state_count(); ++s) {
    if (sts.outgoing(s).empty()) deadlocks.push_back(s);
  }
  auto live = can_reach(sts, deadlocks);
  std::vector<StateClass> out(sts.state_count(), StateClass::livelock);
  for (StateIndex s = 0; s < sts.state_count(); ++s) {
    if (sts.outgoing(s).empty()) {
      out[s] = StateClass::deadlock;
    } else if (live[s]) {
      out[s] = StateClass::live;
    }
  }
  return out;
}

GraphStats graph_stats(const Sts& sts) {
  GraphStats stats;
  stats.states = sts.state_count();
  stats.edges = sts.edge_count();
  stats.finals = sts.finals().size();
  for (auto c : classify_states(sts)) {
    if (c == StateClass::deadlock) ++stats.deadlocks;
    if (c == StateClass::livelock) ++stats.livelocks;
  }
  stats.unboundedness_suspected = sts.unboundedness_suspected;
  return stats;
}

namespace {

std::string state_name(const Sts& sts, StateIndex s, const Net* net) {
  const auto& st = sts.state(s);
  std::string name = "s" + std::to_string(s);
  if (net != nullptr && st.marking.size() == net->place_count()) {
    name += ' ' + st.marking.to_string(*net);
  }
  if (st.dfa_state != std::numeric_limits<std::uint32_t>::max()) {
    name += " q" + std::to_string(st.dfa_state);
  }
  return name;
}

}  // namespace

std::string to_edge_list(const Sts& sts, const Net* net) {
  std::ostringstream out;
  out << "# initial " << sts.initial() << '\n';
  for (auto f : sts.finals()) out << "# final " << f << '\n';
  for (const auto& e : sts.edges()) {
    out << e.source << " -> " << e.target << ' ' << sts.transition_id(e.transition)
        << ' ' << text::quote_if_needed(sts.label(e).display()) << ' '
        << text::format_double(e.probability) << '\n';
  }
  (void)net;
  return out.str();
}

std::string to_dot(const Sts& sts, const Net* net) {
  std::ostringstream out;
  out << "digraph sts {\n  rankdir=LR;\n";
  for (StateIndex s = 0; s < sts.state_count(); ++s) {
    out << "  " << s << " [label=\"" << state_name(sts, s, net) << "\""
        << (sts.is_final(s) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
  }
  out << "  start [shape=point];\n  start -> " << sts.initial() << ";\n";
  for (const auto& e : sts.edges()) {
    out << "  " << e.source << " -> " << e.target << " [label=\"("
        << sts.transition_id(e.transition) << ", " << sts.label(e).display() << ") "
        << text::format_double(e.probability) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace slpn
