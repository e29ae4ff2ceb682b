#pragma once

// Labelled generalised stochastic Petri nets (immediate and timed
// transitions, weights, activity or silent labels) and their token game.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slpn/error.hpp"

namespace slpn {

using PlaceIndex = std::uint32_t;
using TransitionIndex = std::uint32_t;

/// Token reserved for the silent label in every text format.
inline constexpr std::string_view kSilentToken = "tau";

/// A transition label: either a visible activity or the silent label.
class Label {
 public:
  Label() = default;  // silent

  static Label silent() { return Label{}; }
  /// Throws Error for an empty name or the reserved silent token.
  static Label activity(std::string name);

  bool is_silent() const noexcept { return name_.empty(); }
  /// Activity name; empty for the silent label.
  const std::string& name() const noexcept { return name_; }
  std::string display() const { return is_silent() ? std::string(kSilentToken) : name_; }

  auto operator<=>(const Label&) const = default;

 private:
  explicit Label(std::string name) : name_(std::move(name)) {}

  std::string name_;
};

/// A visible trace: a sequence of activity names.
using Trace = std::vector<std::string>;

enum class TransitionKind { immediate, timed };

struct Transition {
  std::string id;
  TransitionKind kind = TransitionKind::timed;
  /// Relative weight for immediate transitions, exponential rate for timed ones.
  double weight = 1.0;
  Label label;
  std::vector<PlaceIndex> preset;
  std::vector<PlaceIndex> postset;
};

struct Arc {
  bool into_transition = true;  // place -> transition when true
  PlaceIndex place = 0;
  TransitionIndex transition = 0;
};

/// Net structure. Built incrementally, then treated as an immutable value.
class Net {
 public:
  PlaceIndex add_place(std::string id);
  TransitionIndex add_transition(std::string id, TransitionKind kind,
                                 double weight, Label label);
  /// Adds an arc between two existing nodes; direction follows which end is a
  /// place. Throws on unknown ids, place-place/transition-transition pairs and
  /// duplicates.
  void add_arc(std::string_view from, std::string_view to);
  void add_input_arc(PlaceIndex place, TransitionIndex transition);
  void add_output_arc(TransitionIndex transition, PlaceIndex place);

  std::size_t place_count() const noexcept { return places_.size(); }
  std::size_t transition_count() const noexcept { return transitions_.size(); }

  const std::string& place(PlaceIndex p) const { return places_.at(p); }
  const std::vector<std::string>& places() const noexcept { return places_; }
  const Transition& transition(TransitionIndex t) const { return transitions_.at(t); }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  std::optional<PlaceIndex> find_place(std::string_view id) const;
  std::optional<TransitionIndex> find_transition(std::string_view id) const;

  /// Multiplies every weight by `factor` (> 0).
  Net scaled(double factor) const;

 private:
  bool id_taken(std::string_view id) const;

  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  std::unordered_map<std::string, PlaceIndex> place_ids_;
  std::unordered_map<std::string, TransitionIndex> transition_ids_;
};

/// Multiset of places, stored densely (one counter per place).
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t places) : tokens_(places, 0) {}

  std::size_t size() const noexcept { return tokens_.size(); }
  std::uint32_t operator[](PlaceIndex p) const { return tokens_[p]; }
  std::uint32_t& operator[](PlaceIndex p) { return tokens_[p]; }
  const std::vector<std::uint32_t>& tokens() const noexcept { return tokens_; }

  std::uint64_t total() const noexcept;
  bool empty() const noexcept { return total() == 0; }
  bool covers(std::span<const PlaceIndex> places) const;
  /// True when every place holds at least as many tokens as in `other`.
  bool dominates(const Marking& other) const;

  /// Renders as `[a,b^2]`, listing places with a positive count.
  std::string to_string(const Net& net) const;

  bool operator==(const Marking&) const = default;

 private:
  std::vector<std::uint32_t> tokens_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept;
};

/// Labelled stochastic process: a net with an initial marking and final
/// markings. When `complete_finals` is set, the finals are exactly the
/// reachable deadlock markings and `finals` is empty.
struct Lsp {
  Net net;
  Marking initial;
  std::vector<Marking> finals;
  bool complete_finals = true;
};

/// Parses `place:mult[,place:mult...]`; a bare place name counts once.
Marking parse_marking(const Net& net, std::string_view spec,
                      std::size_t line_number = 0);
std::string format_marking_spec(const Net& net, const Marking& marking);

Lsp parse_slpn(std::string_view text);
std::string serialize_slpn(const Lsp& lsp);

/// Transitions enabled under immediate-over-timed priority, in index order.
std::vector<TransitionIndex> enabled(const Net& net, const Marking& m);
inline std::vector<TransitionIndex> enabled(const Lsp& lsp, const Marking& m) {
  return enabled(lsp.net, m);
}

/// Fires `t`; throws Error if `t` is not enabled in `m`.
Marking fire(const Net& net, const Marking& m, TransitionIndex t);
inline Marking fire(const Lsp& lsp, const Marking& m, TransitionIndex t) {
  return fire(lsp.net, m, t);
}

/// Weight of `t` over the total weight of the enabled set; 0 if not enabled.
double firing_probability(const Net& net, const Marking& m, TransitionIndex t);
inline double firing_probability(const Lsp& lsp, const Marking& m,
                                 TransitionIndex t) {
  return firing_probability(lsp.net, m, t);
}

/// Structural checks that need no state exploration: isolated nodes,
/// source transitions, explicit finals that enable a transition.
Diagnostics validate(const Lsp& lsp);

}  // namespace slpn
