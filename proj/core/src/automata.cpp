#include "slpn/automata.hpp"

#include <sstream>
#include <unordered_map>

#include "slpn/text.hpp"

namespace slpn {

Dfa::StateId Dfa::add_state(std::string name, bool accepting) {
  if (find_state(name)) throw Error("duplicate state '" + name + "'");
  names_.push_back(std::move(name));
  accepting_.push_back(accepting);
  moves_.emplace_back();
  tau_.push_back(kNone);
  fallback_.push_back(kNone);
  return static_cast<StateId>(names_.size() - 1);
}

void Dfa::check_state(StateId s) const {
  if (s >= names_.size()) throw Error("unknown automaton state");
}

void Dfa::set_initial(StateId s) {
  check_state(s);
  initial_ = s;
}

void Dfa::set_accepting(StateId s, bool accepting) {
  check_state(s);
  accepting_[s] = accepting;
}

void Dfa::add_symbol(std::string symbol) {
  if (symbol.empty() || symbol == kSilentToken) {
    throw Error("invalid alphabet symbol '" + symbol + "'");
  }
  alphabet_.insert(std::move(symbol));
}

void Dfa::add_transition(StateId source, const Label& label, StateId target) {
  check_state(source);
  check_state(target);
  if (label.is_silent()) {
    if (!silenced_) throw Error("tau move on an automaton that is not silenced");
    if (tau_[source] != kNone) {
      throw Error("duplicate tau move from state '" + names_[source] + "'");
    }
    tau_[source] = target;
    return;
  }
  if (!alphabet_.count(label.name())) {
    throw Error("label '" + label.name() + "' is not in the alphabet");
  }
  auto [it, inserted] = moves_[source].emplace(label.name(), target);
  if (!inserted) {
    throw Error("duplicate move from state '" + names_[source] + "' on '" + label.name() +
                "'");
  }
}

void Dfa::set_fallback(StateId source, StateId target) {
  check_state(source);
  check_state(target);
  if (fallback_[source] != kNone) {
    throw Error("duplicate wildcard move from state '" + names_[source] + "'");
  }
  fallback_[source] = target;
}

std::optional<Dfa::StateId> Dfa::find_state(std::string_view name) const {
  for (std::size_t s = 0; s < names_.size(); ++s) {
    if (names_[s] == name) return static_cast<StateId>(s);
  }
  return std::nullopt;
}

std::optional<Dfa::StateId> Dfa::step(StateId s, const Label& label) const {
  if (label.is_silent()) {
    if (tau_.at(s) == kNone) return std::nullopt;
    return tau_[s];
  }
  const auto& m = moves_.at(s);
  if (auto it = m.find(label.name()); it != m.end()) return it->second;
  if (fallback_[s] != kNone) return fallback_[s];
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

Label parse_label_token(const text::Token& token, std::size_t line) {
  if (!token.quoted && token.value == kSilentToken) return Label::silent();
  if (token.value == kSilentToken) throw ParseError(line, "'tau' is reserved");
  if (token.value.empty()) throw ParseError(line, "empty label");
  return Label::activity(token.value);
}

}  // namespace

Dfa parse_dfa(std::string_view input) {
  struct PendingMove {
    std::size_t line;
    std::string source;
    text::Token label;
    std::string target;
  };
  Dfa dfa;
  std::vector<PendingMove> pending;
  bool seen_initial = false;
  bool seen_content = false;
  std::size_t line_no = 0;
  for (auto raw : text::lines(input)) {
    ++line_no;
    auto tokens = text::tokenize(raw, line_no);
    if (tokens.empty()) continue;
    const auto& head = tokens[0].value;
    if (head == "silenced") {
      if (tokens.size() != 1) throw ParseError(line_no, "'silenced' takes no arguments");
      if (seen_content) throw ParseError(line_no, "'silenced' must precede all other lines");
      // Routed through silence() so the flag is set consistently.
      dfa = silence(dfa);
      continue;
    }
    seen_content = true;
    if (head == "alphabet") {
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i].value == kSilentToken || tokens[i].value.empty()) {
          throw ParseError(line_no, "invalid alphabet symbol '" + tokens[i].value + "'");
        }
        dfa.add_symbol(tokens[i].value);
      }
    } else if (head == "state") {
      if (tokens.size() < 2) throw ParseError(line_no, "expected: state <id> [initial] [accepting]");
      if (!text::is_identifier(tokens[1].value)) {
        throw ParseError(line_no, "invalid state id '" + tokens[1].value + "'");
      }
      if (dfa.find_state(tokens[1].value)) {
        throw ParseError(line_no, "duplicate state '" + tokens[1].value + "'");
      }
      bool initial = false;
      bool accepting = false;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (tokens[i].value == "initial" && !initial) {
          initial = true;
        } else if (tokens[i].value == "accepting" && !accepting) {
          accepting = true;
        } else {
          throw ParseError(line_no, "unexpected '" + tokens[i].value + "' in state line");
        }
      }
      auto s = dfa.add_state(tokens[1].value, accepting);
      if (initial) {
        if (seen_initial) throw ParseError(line_no, "more than one initial state");
        seen_initial = true;
        dfa.set_initial(s);
      }
    } else if (head == "trans") {
      if (tokens.size() != 4) throw ParseError(line_no, "expected: trans <src> <label|*|tau> <dst>");
      pending.push_back({line_no, tokens[1].value, tokens[2], tokens[3].value});
    } else {
      throw ParseError(line_no, "unknown directive '" + head + "'");
    }
  }
  if (!seen_initial) throw ParseError(0, "no initial state");
  for (const auto& move : pending) {
    auto src = dfa.find_state(move.source);
    auto dst = dfa.find_state(move.target);
    if (!src) throw ParseError(move.line, "unknown state '" + move.source + "'");
    if (!dst) throw ParseError(move.line, "unknown state '" + move.target + "'");
    try {
      if (!move.label.quoted && move.label.value == "*") {
        dfa.set_fallback(*src, *dst);
      } else {
        Label label = parse_label_token(move.label, move.line);
        if (label.is_silent() && !dfa.silenced()) {
          throw ParseError(move.line, "tau moves require the 'silenced' header");
        }
        dfa.add_transition(*src, label, *dst);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(move.line, e.what());
    }
  }
  return dfa;
}

namespace {

std::string label_token(const std::string& label) {
  if (label == "*") return "\"*\"";
  return text::quote_if_needed(label);
}

}  // namespace

std::string serialize_dfa(const Dfa& dfa) {
  std::ostringstream out;
  if (dfa.silenced()) out << "silenced\n";
  out << "alphabet";
  for (const auto& a : dfa.alphabet()) out << ' ' << label_token(a);
  out << '\n';
  for (Dfa::StateId s = 0; s < dfa.state_count(); ++s) {
    out << "state " << dfa.state_name(s);
    if (s == dfa.initial()) out << " initial";
    if (dfa.is_accepting(s)) out << " accepting";
    out << '\n';
  }
  for (Dfa::StateId s = 0; s < dfa.state_count(); ++s) {
    for (const auto& [label, target] : dfa.moves(s)) {
      out << "trans " << dfa.state_name(s) << ' ' << label_token(label) << ' '
          << dfa.state_name(target) << '\n';
    }
    if (dfa.tau_move(s) != Dfa::kNone) {
      out << "trans " << dfa.state_name(s) << " tau " << dfa.state_name(dfa.tau_move(s)) << '\n';
    }
    if (dfa.fallback(s) != Dfa::kNone) {
      out << "trans " << dfa.state_name(s) << " * " << dfa.state_name(dfa.fallback(s)) << '\n';
    }
  }
  return out.str();
}

bool accepts(const Dfa& dfa, std::span<const Label> word) {
  if (dfa.initial() == Dfa::kNone) throw Error("automaton has no initial state");
  Dfa::StateId s = dfa.initial();
  bool alive = true;
  for (const auto& l : word) {
    if (l.is_silent() ? !dfa.silenced() : !dfa.alphabet().count(l.name())) {
      throw Error("symbol '" + l.display() + "' is outside the alphabet");
    }
    if (!alive) continue;
    auto next = dfa.step(s, l);
    if (!next) {
      alive = false;
    } else {
      s = *next;
    }
  }
  return alive && dfa.is_accepting(s);
}

bool accepts(const Dfa& dfa, const Trace& word) {
  std::vector<Label> labels;
  labels.reserve(word.size());
  for (const auto& w : word) {
    if (w.empty() || w == kSilentToken) {
      throw Error("symbol '" + w + "' is outside the alphabet");
    }
    labels.push_back(Label::activity(w));
  }
  return accepts(dfa, std::span<const Label>(labels));
}

Dfa silence(const Dfa& dfa) {
  if (dfa.silenced_) throw Error("automaton is already silenced");
  Dfa out = dfa;
  out.silenced_ = true;
  for (Dfa::StateId s = 0; s < out.state_count(); ++s) out.tau_[s] = s;
  return out;
}

Dfa trace_dfa(const Trace& trace) {
  Dfa dfa;
  for (const auto& a : trace) dfa.add_symbol(a);
  for (std::size_t i = 0; i <= trace.size(); ++i) {
    dfa.add_state("q" + std::to_string(i), i == trace.size());
  }
  dfa.set_initial(0);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    dfa.add_transition(static_cast<Dfa::StateId>(i), Label::activity(trace[i]),
                       static_cast<Dfa::StateId>(i + 1));
  }
  return dfa;
}

Sts product(const Sts& sts, const Dfa& sdfa) {
  if (sdfa.initial() == Dfa::kNone) throw Error("automaton has no initial state");
  Sts out;
  for (std::size_t t = 0; t < sts.transition_ids().size(); ++t) {
    out.add_transition_name(sts.transition_ids()[t], sts.transition_labels()[t]);
  }
  const std::uint64_t width = sdfa.state_count();
  std::unordered_map<std::uint64_t, StateIndex> index;
  auto discover = [&](StateIndex rg, Dfa::StateId q) {
    std::uint64_t key = static_cast<std::uint64_t>(rg) * width + q;
    if (auto it = index.find(key); it != index.end()) return it->second;
    StateIndex s = out.add_state(StsState{sts.state(rg).marking, rg, q});
    if (sts.is_final(rg) && sdfa.is_accepting(q)) out.set_final(s);
    index.emplace(key, s);
    return s;
  };
  out.set_initial(discover(sts.initial(), sdfa.initial()));
  // States are numbered in discovery order, so the index doubles as the queue.
  std::size_t next = 0;
  while (next < out.state_count()) {
    StateIndex s = static_cast<StateIndex>(next++);
    StateIndex rg = out.state(s).rg_state;
    Dfa::StateId q = out.state(s).dfa_state;
    for (auto e : sts.outgoing(rg)) {
      const auto& edge = sts.edge(e);
      auto moved = sdfa.step(q, sts.label(edge));
      if (!moved) continue;
      StateIndex target = discover(edge.target, *moved);
      out.add_edge(StsEdge{s, edge.transition, target, edge.probability});
    }
  }
  out.unboundedness_suspected = sts.unboundedness_suspected;
  return out;
}

Sts complete_product(const Sts& product_sts, const Sts& sts) {
  Sts out = product_sts;
  TransitionIndex fresh = out.add_transition_name("sink", Label::silent());
  StateIndex sink = kNoState;
  for (StateIndex s = 0; s < product_sts.state_count(); ++s) {
    const auto& st = product_sts.state(s);
    if (st.rg_state == kNoState) throw Error("state carries no reachability-graph state");
    double missing = sts.out_mass(st.rg_state) - product_sts.out_mass(s);
    if (missing <= 1e-12) continue;
    if (sink == kNoState) sink = out.add_state(StsState{});
    out.add_edge(StsEdge{s, fresh, sink, missing});
  }
  return out;
}

std::vector<std::string> labels_outside_alphabet(const Sts& sts, const Dfa& dfa) {
  std::set<std::string> missing;
  for (const auto& e : sts.edges()) {
    const auto& l = sts.label(e);
    if (!l.is_silent() && !dfa.alphabet().count(l.name())) missing.insert(l.name());
  }
  return {missing.begin(), missing.end()};
}

}  // namespace slpn
