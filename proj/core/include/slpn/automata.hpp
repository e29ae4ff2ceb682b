#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slpn/error.hpp"
#include "slpn/net.hpp"
#include "slpn/reachability.hpp"

namespace slpn {

/// Partial deterministic automaton over activity labels. A missing move
/// rejects. Each state may carry a fallback move (`*` in the text format)
/// taken on any visible label without an explicit move from that state,
/// labels outside the alphabet included. The fallback never matches tau.
class Dfa {
 public:
  using StateId = std::uint32_t;
  static constexpr StateId kNone = std::numeric_limits<StateId>::max();

  StateId add_state(std::string name, bool accepting = false);
  void set_initial(StateId s);
  void set_accepting(StateId s, bool accepting = true);
  void add_symbol(std::string symbol);
  /// Throws on a duplicate (state, label) move, an unknown state, a symbol
  /// outside the alphabet, or a tau move on an unsilenced automaton.
  void add_transition(StateId source, const Label& label, StateId target);
  void set_fallback(StateId source, StateId target);

  std::size_t state_count() const noexcept { return names_.size(); }
  const std::string& state_name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find_state(std::string_view name) const;
  StateId initial() const noexcept { return initial_; }
  bool is_accepting(StateId s) const { return accepting_.at(s); }
  const std::set<std::string>& alphabet() const noexcept { return alphabet_; }
  bool silenced() const noexcept { return silenced_; }

  /// Successor on `label`, or nullopt when the automaton has no move.
  std::optional<StateId> step(StateId s, const Label& label) const;

  const std::map<std::string, StateId>& moves(StateId s) const { return moves_.at(s); }
  StateId tau_move(StateId s) const { return tau_.at(s); }
  StateId fallback(StateId s) const { return fallback_.at(s); }

  bool operator==(const Dfa&) const = default;

 private:
  friend Dfa silence(const Dfa& dfa);

  void check_state(StateId s) const;

  std::vector<std::string> names_;
  std::vector<bool> accepting_;
  std::vector<std::map<std::string, StateId>> moves_;
  std::vector<StateId> tau_;
  std::vector<StateId> fallback_;
  std::set<std::string> alphabet_;
  StateId initial_ = kNone;
  bool silenced_ = false;
};

Dfa parse_dfa(std::string_view text);
std::string serialize_dfa(const Dfa& dfa);

/// Runs the automaton on `word`. Throws Error on a symbol outside the
/// alphabet (tau is inside the alphabet only after silencing).
bool accepts(const Dfa& dfa, std::span<const Label> word);
bool accepts(const Dfa& dfa, const Trace& word);

/// Adds a tau self-loop on every state. Throws if already silenced.
Dfa silence(const Dfa& dfa);

/// Linear automaton accepting exactly `trace`.
Dfa trace_dfa(const Trace& trace);

/// Product of a stochastic transition system with a silenced automaton,
/// restricted to pairs reachable from the initial pair. Edges without a
/// matching move are dropped, so the result may be sub-stochastic.
Sts product(const Sts& sts, const Dfa& silenced_dfa);

/// Export-only completion: each product state whose outgoing mass falls
/// short of its reachability-graph state gets an edge for the missing mass
/// to one fresh non-final sink.
Sts complete_product(const Sts& product, const Sts& sts);

/// Visible labels used by `sts` that are not in the automaton's alphabet.
std::vector<std::string> labels_outside_alphabet(const Sts& sts, const Dfa& dfa);

}  // namespace slpn
