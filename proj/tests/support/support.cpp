#include "support.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <unordered_map>
#include <sstream>

namespace slpn::testing {

std::string data_path(const std::string& name) {
  return std::string(SLPN_TEST_DATA_DIR) + "/" + name;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Lsp load_lsp(const std::string& name) { return parse_slpn(read_text(data_path(name))); }

Dfa load_dfa(const std::string& name) { return parse_dfa(read_text(data_path(name))); }

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

std::vector<PlaceIndex> pick_places(std::mt19937_64& rng, std::size_t lo, std::size_t hi,
                                    std::size_t count) {
  std::vector<PlaceIndex> out;
  if (hi < lo) return out;
  count = std::min(count, hi - lo + 1);
  while (out.size() < count) {
    auto p = static_cast<PlaceIndex>(uniform(rng, lo, hi));
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

// Presets are drawn from places already produced by earlier transitions
// (starting from p0) so most transitions can actually fire; postsets favour
// fresh places so the net grows deep rather than wide.
Lsp draw_lsp(std::mt19937_64& rng, const RandomNetOptions& o) {
  static const char* const kLabels[] = {"a", "b", "c"};
  static const double kWeights[] = {1.0, 2.0, 3.0, 0.5, 2.5};
  Lsp lsp;
  std::size_t places = uniform(rng, o.min_places, o.max_places);
  std::size_t transitions = uniform(rng, o.min_transitions, o.max_transitions);
  for (std::size_t p = 0; p < places; ++p) lsp.net.add_place("p" + std::to_string(p));
  std::vector<PlaceIndex> produced{0};
  std::size_t fresh = 1;
  std::size_t silent = uniform(rng, 0, transitions - 1);
  for (std::size_t t = 0; t < transitions; ++t) {
    auto kind = (!o.timed_only && chance(rng, 0.3)) ? TransitionKind::immediate
                                                    : TransitionKind::timed;
    double weight = kWeights[uniform(rng, 0, o.integer_weights ? 2 : 4)];
    Label label = (t == silent || chance(rng, 0.25)) ? Label::silent()
                                                     : Label::activity(kLabels[uniform(rng, 0, 2)]);
    auto ti = lsp.net.add_transition("t" + std::to_string(t), kind, weight, label);

    std::vector<PlaceIndex> eligible;
    for (auto p : produced) {
      if (!o.acyclic || p + 1 < places) eligible.push_back(p);
    }
    if (eligible.empty()) eligible.push_back(0);
    std::shuffle(eligible.begin(), eligible.end(), rng);
    std::vector<PlaceIndex> pre(eligible.begin(),
                                eligible.begin() + (chance(rng, 0.75) || eligible.size() < 2 ? 1 : 2));
    PlaceIndex floor = o.acyclic ? *std::max_element(pre.begin(), pre.end()) + 1 : 0;

    std::vector<PlaceIndex> post;
    std::size_t outputs = chance(rng, 0.1) ? 0 : (chance(rng, 0.6) ? 1 : 2);
    for (std::size_t k = 0; k < outputs; ++k) {
      PlaceIndex p;
      if (fresh < places && fresh >= floor && chance(rng, 0.5)) {
        p = static_cast<PlaceIndex>(fresh++);
      } else if (floor < places) {
        p = static_cast<PlaceIndex>(uniform(rng, floor, places - 1));
      } else {
        break;
      }
      if (std::find(post.begin(), post.end(), p) == post.end()) post.push_back(p);
    }
    for (auto p : pre) lsp.net.add_input_arc(p, ti);
    for (auto p : post) {
      lsp.net.add_output_arc(ti, p);
      if (std::find(produced.begin(), produced.end(), p) == produced.end()) produced.push_back(p);
    }
  }
  lsp.initial = Marking(places);
  lsp.initial[0] = 1;
  if (places > 2 && chance(rng, 0.3)) {
    lsp.initial[static_cast<PlaceIndex>(uniform(rng, 1, places - 1))] += 1;
  }
  return lsp;
}

}  // namespace

Lsp random_lsp(std::mt19937_64& rng, const RandomNetOptions& options) {
  while (true) {
    Lsp lsp = draw_lsp(rng, options);
    try {
      auto rg = build_reachability_graph(lsp, ReachabilityOptions{options.max_states});
      if (rg.state_count() >= 4) return lsp;
    } catch (const StateCapError&) {
    }
  }
}

Dfa random_dfa(std::mt19937_64& rng, std::size_t max_states) {
  static const char* const kLabels[] = {"a", "b", "c"};
  Dfa dfa;
  for (const char* l : kLabels) dfa.add_symbol(l);
  std::size_t n = uniform(rng, 1, max_states);
  for (std::size_t s = 0; s < n; ++s) dfa.add_state("q" + std::to_string(s), chance(rng, 0.5));
  dfa.set_initial(0);
  for (std::size_t s = 0; s < n; ++s) {
    auto src = static_cast<Dfa::StateId>(s);
    for (const char* l : kLabels) {
      if (chance(rng, 0.5)) {
        dfa.add_transition(src, Label::activity(l), static_cast<Dfa::StateId>(uniform(rng, 0, n - 1)));
      }
    }
    if (chance(rng, 0.4)) dfa.set_fallback(src, static_cast<Dfa::StateId>(uniform(rng, 0, n - 1)));
  }
  return dfa;
}

Trace random_word(std::mt19937_64& rng, std::size_t max_len) {
  static const char* const kLabels[] = {"a", "b", "c"};
  Trace word(uniform(rng, 0, max_len));
  for (auto& w : word) w = kLabels[uniform(rng, 0, 2)];
  return word;
}

bool is_final_marking(const Lsp& lsp, const Marking& m) {
  if (!enabled(lsp.net, m).empty()) return false;
  if (lsp.complete_finals) return true;
  return std::find(lsp.finals.begin(), lsp.finals.end(), m) != lsp.finals.end();
}

void for_each_run(const Lsp& lsp, std::size_t max_len,
                  const std::function<void(const std::vector<TransitionIndex>&, const Marking&)>& visit,
                  std::size_t limit) {
  std::size_t visited = 0;
  std::vector<TransitionIndex> run;
  std::function<void(const Marking&)> walk = [&](const Marking& m) {
    if (visited >= limit) return;
    ++visited;
    visit(run, m);
    if (run.size() == max_len) return;
    for (auto t : enabled(lsp.net, m)) {
      run.push_back(t);
      walk(fire(lsp.net, m, t));
      run.pop_back();
    }
  };
  walk(lsp.initial);
}

std::vector<double> value_iteration(const Sts& sts, std::span<const StateIndex> targets,
                                    std::size_t steps) {
  const auto n = sts.state_count();
  std::vector<bool> pinned(n, false);
  for (auto t : targets) pinned[t] = true;
  std::vector<double> v(n, 0.0);
  for (auto t : targets) v[t] = 1.0;
  std::vector<double> next(n, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& e : sts.edges()) {
      if (!pinned[e.source]) next[e.source] += e.probability * v[e.target];
    }
    for (auto t : targets) next[t] = 1.0;
    v.swap(next);
  }
  return v;
}

Sts random_chain(std::mt19937_64& rng, std::size_t states, std::size_t finals) {
  Sts sts;
  sts.add_transition_name("x", Label::silent());
  for (std::size_t s = 0; s < states; ++s) sts.add_state(StsState{});
  for (std::size_t s = states - finals; s < states; ++s) sts.set_final(static_cast<StateIndex>(s));
  for (std::size_t s = 0; s + finals < states; ++s) {
    std::size_t k = uniform(rng, 1, 4);
    std::vector<StateIndex> targets;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      targets.push_back(static_cast<StateIndex>(uniform(rng, 0, states - 1)));
      weights.push_back(std::uniform_real_distribution<double>(0.05, 1.0)(rng));
      total += weights.back();
    }
    for (std::size_t i = 0; i < k; ++i) {
      sts.add_edge(StsEdge{static_cast<StateIndex>(s), 0, targets[i], weights[i] / total});
    }
  }
  sts.set_initial(0);
  return sts;
}

Dfa complement(const Dfa& dfa, const std::set<std::string>& alphabet) {
  Dfa out;
  for (const auto& a : alphabet) out.add_symbol(a);
  for (Dfa::StateId s = 0; s < dfa.state_count(); ++s) {
    out.add_state(dfa.state_name(s), !dfa.is_accepting(s));
  }
  auto sink = out.add_state("complement_sink", true);
  out.set_initial(dfa.initial());
  for (Dfa::StateId s = 0; s < dfa.state_count(); ++s) {
    for (const auto& a : alphabet) {
      auto next = dfa.step(s, Label::activity(a));
      out.add_transition(s, Label::activity(a), next ? *next : sink);
    }
  }
  for (const auto& a : alphabet) out.add_transition(sink, Label::activity(a), sink);
  return out;
}

Lsp insert_silent_step(const Lsp& lsp, TransitionIndex t, PlaceIndex place) {
  Lsp out;
  const Net& net = lsp.net;
  for (const auto& p : net.places()) out.net.add_place(p);
  auto fresh = out.net.add_place("inserted_place");
  for (const auto& tr : net.transitions()) {
    out.net.add_transition(tr.id, tr.kind, tr.weight, tr.label);
  }
  auto step = out.net.add_transition("inserted_step", TransitionKind::immediate, 1.0,
                                     Label::silent());
  for (const auto& arc : net.arcs()) {
    if (arc.into_transition) {
      out.net.add_input_arc(arc.place, arc.transition);
    } else if (arc.transition == t && arc.place == place) {
      out.net.add_output_arc(arc.transition, fresh);
    } else {
      out.net.add_output_arc(arc.transition, arc.place);
    }
  }
  out.net.add_input_arc(fresh, step);
  out.net.add_output_arc(step, place);
  auto widen = [&](const Marking& m) {
    Marking w(out.net.place_count());
    for (PlaceIndex p = 0; p < m.size(); ++p) w[p] = m[p];
    return w;
  };
  out.initial = widen(lsp.initial);
  for (const auto& f : lsp.finals) out.finals.push_back(widen(f));
  out.complete_finals = lsp.complete_finals;
  return out;
}

Rational exact_probability(const Lsp& lsp, const std::function<bool(const Marking&)>& target,
                           const Trace* trace) {
  struct Node {
    Marking marking;
    std::size_t pos;
  };
  struct Move {
    std::size_t to;
    Rational p;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<Move>> moves;
  std::map<std::pair<std::vector<std::uint32_t>, std::size_t>, std::size_t> index;
  auto intern = [&](const Marking& m, std::size_t pos) {
    auto key = std::make_pair(m.tokens(), pos);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    index.emplace(key, nodes.size());
    nodes.push_back({m, pos});
    moves.emplace_back();
    return nodes.size() - 1;
  };
  intern(lsp.initial, 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Marking m = nodes[i].marking;
    std::size_t pos = nodes[i].pos;
    auto en = enabled(lsp.net, m);
    Rational total = 0;
    for (auto t : en) total += Rational(lsp.net.transition(t).weight);
    for (auto t : en) {
      const auto& tr = lsp.net.transition(t);
      std::size_t next_pos = pos;
      if (trace != nullptr && !tr.label.is_silent()) {
        if (pos >= trace->size() || (*trace)[pos] != tr.label.name()) continue;
        next_pos = pos + 1;
      }
      auto j = intern(fire(lsp.net, m, t), next_pos);
      moves[i].push_back({j, Rational(tr.weight) / total});
    }
  }

  const std::size_t n = nodes.size();
  std::vector<bool> is_target(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = nodes[i];
    bool done = trace == nullptr || node.pos == trace->size();
    is_target[i] = done && is_final_marking(lsp, node.marking) && target(node.marking);
  }
  std::vector<std::vector<std::size_t>> reverse(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& mv : moves[i]) reverse[mv.to].push_back(i);
  }
  std::vector<bool> useful(is_target);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (useful[i]) queue.push_back(i);
  }
  while (!queue.empty()) {
    auto i = queue.front();
    queue.pop_front();
    for (auto j : reverse[i]) {
      if (!useful[j]) {
        useful[j] = true;
        queue.push_back(j);
      }
    }
  }
  if (!useful[0]) return 0;

  std::vector<std::size_t> column(n, n);
  std::vector<std::size_t> unknowns;
  for (std::size_t i = 0; i < n; ++i) {
    if (useful[i] && !is_target[i]) {
      column[i] = unknowns.size();
      unknowns.push_back(i);
    }
  }
  if (is_target[0]) return 1;
  const std::size_t k = unknowns.size();
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1, Rational(0)));
  for (std::size_t r = 0; r < k; ++r) {
    auto i = unknowns[r];
    a[r][r] = 1;
    for (const auto& mv : moves[i]) {
      if (is_target[mv.to]) {
        a[r][k] += mv.p;
      } else if (column[mv.to] < n) {
        a[r][column[mv.to]] -= mv.p;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t pivot = c;
    while (a[pivot][c] == 0) ++pivot;
    std::swap(a[pivot], a[c]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return a[column[0]][k] / a[column[0]][column[0]];
}

Lsp scale_weights(const Lsp& lsp, double factor) {
  Lsp out = lsp;
  out.net = lsp.net.scaled(factor);
  return out;
}

}  // namespace slpn::testing
