#include "slpn/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "slpn/text.hpp"

namespace slpn {

Label Label::activity(std::string name) {
  if (name.empty()) throw Error("activity label must not be empty");
  if (name == kSilentToken) {
    throw Error("'tau' is reserved for the silent label");
  }
  return Label(std::move(name));
}

// ---------------------------------------------------------------------------
// Net

bool Net::id_taken(std::string_view id) const {
  std::string key(id);
  return place_ids_.count(key) != 0 || transition_ids_.count(key) != 0;
}

PlaceIndex Net::add_place(std::string id) {
  if (!text::is_identifier(id)) throw Error("invalid place identifier '" + id + "'");
  if (id_taken(id)) throw Error("duplicate identifier '" + id + "'");
  auto index = static_cast<PlaceIndex>(places_.size());
  place_ids_.emplace(id, index);
  places_.push_back(std::move(id));
  return index;
}

TransitionIndex Net::add_transition(std::string id, TransitionKind kind,
                                    double weight, Label label) {
  if (!text::is_identifier(id)) {
    throw Error("invalid transition identifier '" + id + "'");
  }
  if (id_taken(id)) throw Error("duplicate identifier '" + id + "'");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error("nonpositive weight for transition '" + id + "'");
  }
  auto index = static_cast<TransitionIndex>(transitions_.size());
  transition_ids_.emplace(id, index);
  transitions_.push_back(Transition{std::move(id), kind, weight, std::move(label), {}, {}});
  return index;
}

void Net::add_input_arc(PlaceIndex place, TransitionIndex transition) {
  auto& pre = transitions_.at(transition).preset;
  if (place >= places_.size()) throw Error("arc references unknown place");
  if (std::find(pre.begin(), pre.end(), place) != pre.end()) {
    throw Error("duplicate arc " + places_[place] + " -> " + transitions_[transition].id);
  }
  pre.push_back(place);
  arcs_.push_back({true, place, transition});
}

void Net::add_output_arc(TransitionIndex transition, PlaceIndex place) {
  auto& post = transitions_.at(transition).postset;
  if (place >= places_.size()) throw Error("arc references unknown place");
  if (std::find(post.begin(), post.end(), place) != post.end()) {
    throw Error("duplicate arc " + transitions_[transition].id + " -> " + places_[place]);
  }
  post.push_back(place);
  arcs_.push_back({false, place, transition});
}

void Net::add_arc(std::string_view from, std::string_view to) {
  auto from_place = find_place(from);
  auto from_transition = find_transition(from);
  auto to_place = find_place(to);
  auto to_transition = find_transition(to);
  if (!from_place && !from_transition) {
    throw Error("unknown identifier '" + std::string(from) + "'");
  }
  if (!to_place && !to_transition) {
    throw Error("unknown identifier '" + std::string(to) + "'");
  }
  if (from_place && to_transition) {
    add_input_arc(*from_place, *to_transition);
  } else if (from_transition && to_place) {
    add_output_arc(*from_transition, *to_place);
  } else {
    throw Error("arc " + std::string(from) + " -> " + std::string(to) +
                " must connect a place and a transition");
  }
}

std::optional<PlaceIndex> Net::find_place(std::string_view id) const {
  auto it = place_ids_.find(std::string(id));
  if (it == place_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TransitionIndex> Net::find_transition(std::string_view id) const {
  auto it = transition_ids_.find(std::string(id));
  if (it == transition_ids_.end()) return std::nullopt;
  return it->second;
}

Net Net::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("weight scale factor must be positive");
  Net copy = *this;
  for (auto& t : copy.transitions_) t.weight *= factor;
  return copy;
}

// ---------------------------------------------------------------------------
// Marking

std::uint64_t Marking::total() const noexcept {
  return std::accumulate(tokens_.begin(), tokens_.end(), std::uint64_t{0});
}

bool Marking::covers(std::span<const PlaceIndex> places) const {
  return std::all_of(places.begin(), places.end(),
                     [&](PlaceIndex p) { return tokens_[p] > 0; });
}

bool Marking::dominates(const Marking& other) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] < other.tokens_[i]) return false;
  }
  return true;
}

std::string Marking::to_string(const Net& net) const {
  std::string out = "[";
  bool first = true;
  for (std::size_t p = 0; p < tokens_.size(); ++p) {
    if (tokens_[p] == 0) continue;
    if (!first) out += ',';
    first = false;
    out += net.place(static_cast<PlaceIndex>(p));
    if (tokens_[p] > 1) out += '^' + std::to_string(tokens_[p]);
  }
  out += ']';
  return out;
}

std::size_t MarkingHash::operator()(const Marking& m) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : m.tokens()) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Marking parse_marking(const Net& net, std::string_view spec,
                      std::size_t line_number) {
  Marking m(net.place_count());
  spec = text::trim(spec);
  if (spec.empty()) return m;
  for (auto& raw : text::split_quoted(spec, ',', line_number)) {
    std::string_view item = text::trim(raw);
    std::string_view place_id = item;
    std::uint64_t count = 1;
    if (auto colon = item.find(':'); colon != std::string_view::npos) {
      place_id = item.substr(0, colon);
      auto parsed = text::parse_unsigned(item.substr(colon + 1));
      if (!parsed || *parsed == 0) {
        throw ParseError(line_number, "invalid multiplicity in marking '" +
                                          std::string(item) + "'");
      }
      count = *parsed;
    }
    auto p = net.find_place(place_id);
    if (!p) {
      throw ParseError(line_number,
                       "unknown identifier '" + std::string(place_id) + "' in marking");
    }
    m[*p] += static_cast<std::uint32_t>(count);
  }
  return m;
}

std::string format_marking_spec(const Net& net, const Marking& marking) {
  std::string out;
  for (std::size_t p = 0; p < marking.size(); ++p) {
    if (marking[static_cast<PlaceIndex>(p)] == 0) continue;
    if (!out.empty()) out += ',';
    out += net.place(static_cast<PlaceIndex>(p)) + ':' +
           std::to_string(marking[static_cast<PlaceIndex>(p)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SLPN text format

namespace {

struct NumberedLine {
  std::size_t number;
  std::vector<text::Token> tokens;
};

Label parse_label(const text::Token& token, std::size_t line) {
  if (!token.quoted && token.value == kSilentToken) return Label::silent();
  try {
    return Label::activity(token.value);
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

Lsp parse_slpn(std::string_view input) {
  std::vector<NumberedLine> deferred;
  Lsp lsp;
  std::size_t line_number = 0;

  // Declarations first so arcs and markings may reference later nodes.
  for (auto line : text::lines(input)) {
    ++line_number;
    auto tokens = text::tokenize(line, line_number);
    if (tokens.empty()) continue;
    const std::string& keyword = tokens[0].value;
    try {
      if (keyword == "place") {
        if (tokens.size() != 2) throw ParseError(line_number, "expected: place <id>");
        lsp.net.add_place(tokens[1].value);
      } else if (keyword == "transition") {
        if (tokens.size() != 5) {
          throw ParseError(line_number,
                           "expected: transition <id> immediate|timed <weight> <label>");
        }
        TransitionKind kind;
        if (tokens[2].value == "immediate") {
          kind = TransitionKind::immediate;
        } else if (tokens[2].value == "timed") {
          kind = TransitionKind::timed;
        } else {
          throw ParseError(line_number, "transition kind must be 'immediate' or 'timed'");
        }
        auto weight = text::parse_positive_weight(tokens[3].value);
        if (!weight) {
          throw ParseError(line_number, "nonpositive or malformed weight '" +
                                            tokens[3].value + "'");
        }
        lsp.net.add_transition(tokens[1].value, kind, *weight,
                               parse_label(tokens[4], line_number));
      } else if (keyword == "arc" || keyword == "initial" || keyword == "final") {
        deferred.push_back({line_number, std::move(tokens)});
      } else {
        throw ParseError(line_number, "unknown declaration '" + keyword + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_number, e.what());
    }
  }

  if (lsp.net.place_count() == 0) throw ParseError(0, "no places declared");

  lsp.initial = Marking(lsp.net.place_count());
  bool saw_complete = false;
  for (auto& [number, tokens] : deferred) {
    const std::string& keyword = tokens[0].value;
    try {
      if (keyword == "arc") {
        if (tokens.size() == 4) {
          auto mult = text::parse_unsigned(tokens[3].value);
          if (!mult || *mult != 1) {
            throw ParseError(number, "unsupported: arc multiplicity other than 1");
          }
        } else if (tokens.size() != 3) {
          throw ParseError(number, "expected: arc <id> <id>");
        }
        lsp.net.add_arc(tokens[1].value, tokens[2].value);
      } else if (keyword == "initial") {
        if (tokens.size() != 2 && tokens.size() != 3) {
          throw ParseError(number, "expected: initial <place> [multiplicity]");
        }
        auto p = lsp.net.find_place(tokens[1].value);
        if (!p) throw ParseError(number, "unknown identifier '" + tokens[1].value + "'");
        std::uint64_t count = 1;
        if (tokens.size() == 3) {
          auto parsed = text::parse_unsigned(tokens[2].value);
          if (!parsed || *parsed == 0) {
            throw ParseError(number, "initial multiplicity must be a positive integer");
          }
          count = *parsed;
        }
        lsp.initial[*p] += static_cast<std::uint32_t>(count);
      } else {  // final
        if (tokens.size() != 2) {
          throw ParseError(number, "expected: final <place:mult,...> | final complete");
        }
        if (!tokens[1].quoted && tokens[1].value == "complete") {
          saw_complete = true;
        } else {
          Marking m = parse_marking(lsp.net, tokens[1].value, number);
          if (std::find(lsp.finals.begin(), lsp.finals.end(), m) == lsp.finals.end()) {
            lsp.finals.push_back(std::move(m));
          }
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  if (saw_complete && !lsp.finals.empty()) {
    throw ParseError(0, "'final complete' cannot be combined with explicit final markings");
  }
  lsp.complete_finals = lsp.finals.empty();
  return lsp;
}

std::string serialize_slpn(const Lsp& lsp) {
  std::ostringstream out;
  const Net& net = lsp.net;
  for (const auto& p : net.places()) out << "place " << p << '\n';
  for (const auto& t : net.transitions()) {
    out << "transition " << t.id << ' '
        << (t.kind == TransitionKind::immediate ? "immediate" : "timed") << ' '
        << text::format_double(t.weight) << ' '
        << (t.label.is_silent() ? std::string(kSilentToken)
                                : text::quote_if_needed(t.label.name()))
        << '\n';
  }
  for (const auto& arc : net.arcs()) {
    const auto& p = net.place(arc.place);
    const auto& t = net.transition(arc.transition).id;
    if (arc.into_transition) {
      out << "arc " << p << ' ' << t << '\n';
    } else {
      out << "arc " << t << ' ' << p << '\n';
    }
  }
  for (std::size_t p = 0; p < lsp.initial.size(); ++p) {
    auto count = lsp.initial[static_cast<PlaceIndex>(p)];
    if (count > 0) out << "initial " << net.place(static_cast<PlaceIndex>(p)) << ' ' << count << '\n';
  }
  if (!lsp.complete_finals) {
    for (const auto& m : lsp.finals) out << "final " << format_marking_spec(net, m) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Token game

std::vector<TransitionIndex> enabled(const Net& net, const Marking& m) {
  std::vector<TransitionIndex> immediate;
  std::vector<TransitionIndex> timed;
  const auto& ts = net.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!m.covers(ts[i].preset)) continue;
    if (ts[i].kind == TransitionKind::immediate) {
      immediate.push_back(static_cast<TransitionIndex>(i));
    } else if (immediate.empty()) {
      timed.push_back(static_cast<TransitionIndex>(i));
    }
  }
  return immediate.empty() ? timed : immediate;
}

Marking fire(const Net& net, const Marking& m, TransitionIndex t) {
  auto en = enabled(net, m);
  if (std::find(en.begin(), en.end(), t) == en.end()) {
    throw Error("transition '" + net.transition(t).id + "' is not enabled in " +
                m.to_string(net));
  }
  Marking next = m;
  const auto& tr = net.transition(t);
  for (auto p : tr.preset) --next[p];
  for (auto p : tr.postset) ++next[p];
  return next;
}

double firing_probability(const Net& net, const Marking& m, TransitionIndex t) {
  auto en = enabled(net, m);
  double total = 0.0;
  bool found = false;
  for (auto u : en) {
    total += net.transition(u).weight;
    found = found || u == t;
  }
  return found ? net.transition(t).weight / total : 0.0;
}

Diagnostics validate(const Lsp& lsp) {
  Diagnostics out;
  const Net& net = lsp.net;
  std::vector<bool> touched(net.place_count(), false);
  for (const auto& arc : net.arcs()) touched[arc.place] = true;
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    if (!touched[p]) {
      out.push_back({Diagnostic::Severity::warning,
                     "place '" + net.place(static_cast<PlaceIndex>(p)) + "' is not connected"});
    }
  }
  for (const auto& t : net.transitions()) {
    if (t.preset.empty() && t.postset.empty()) {
      out.push_back({Diagnostic::Severity::warning,
                     "transition '" + t.id + "' is not connected"});
    } else if (t.preset.empty()) {
      out.push_back({Diagnostic::Severity::warning,
                     "transition '" + t.id + "' has an empty preset and is always enabled"});
    }
  }
  for (const auto& f : lsp.finals) {
    if (f.size() != net.place_count()) {
      out.push_back({Diagnostic::Severity::error, "final marking has wrong dimension"});
      continue;
    }
    if (!enabled(net, f).empty()) {
      out.push_back({Diagnostic::Severity::error,
                     "final marking " + f.to_string(net) + " is not a deadlock"});
    }
  }
  return out;
}

}  // namespace slpn
