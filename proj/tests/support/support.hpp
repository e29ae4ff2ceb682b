#pragma once

// Test-only helpers: example nets, random models and brute-force oracles that
// do not go through the reachability graph, the product or the solver.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "slpn/automata.hpp"
#include "slpn/net.hpp"
#include "slpn/reachability.hpp"

namespace slpn::testing {

std::string data_path(const std::string& name);
std::string read_text(const std::string& path);
Lsp load_lsp(const std::string& name);
Dfa load_dfa(const std::string& name);

struct RandomNetOptions {
  std::size_t min_places = 2;
  std::size_t max_places = 10;
  std::size_t min_transitions = 2;
  std::size_t max_transitions = 12;
  bool acyclic = false;
  bool timed_only = false;
  /// Weights drawn from {1, 2, 3}; otherwise also 1/2 and 5/2.
  bool integer_weights = false;
  std::size_t max_states = 2000;
};

/// Random bounded LSP with labels from {a, b, c} and at least one silent
/// transition. Candidates whose state space exceeds `max_states` or that
/// have fewer than four states are redrawn.
Lsp random_lsp(std::mt19937_64& rng, const RandomNetOptions& options = {});

/// Random partial DFA over {a, b, c}, possibly with wildcard moves.
Dfa random_dfa(std::mt19937_64& rng, std::size_t max_states = 4);

/// Random word over {a, b, c} of length 0..max_len.
Trace random_word(std::mt19937_64& rng, std::size_t max_len);

/// True when `m` is a final marking of the LSP (any deadlock if complete).
bool is_final_marking(const Lsp& lsp, const Marking& m);

/// Calls `visit(run, marking)` for every firing sequence of length at most
/// `max_len` from the initial marking, the empty run included, using the
/// token game directly. Stops early once `limit` runs were visited.
void for_each_run(const Lsp& lsp, std::size_t max_len,
                  const std::function<void(const std::vector<TransitionIndex>&, const Marking&)>& visit,
                  std::size_t limit = 2'000'000);

/// Trace distribution by exhaustive token-game expansion, cut at `max_depth`
/// firings. `Num` is double or an exact rational type; `weight` converts a
/// transition weight. Mass of runs cut at the depth bound goes to `*open`.
template <class Num>
std::map<Trace, Num> enumerate_traces(const Lsp& lsp, std::size_t max_depth,
                                      const std::function<Num(double)>& weight,
                                      Num* open = nullptr) {
  std::map<Trace, Num> out;
  Num cut{0};
  std::function<void(const Marking&, const Num&, Trace&, std::size_t)> walk =
      [&](const Marking& m, const Num& p, Trace& trace, std::size_t depth) {
        auto en = enabled(lsp.net, m);
        if (en.empty()) {
          if (is_final_marking(lsp, m)) out[trace] += p;
          return;
        }
        if (depth == max_depth) {
          cut += p;
          return;
        }
        Num total{0};
        for (auto t : en) total += weight(lsp.net.transition(t).weight);
        for (auto t : en) {
          const auto& tr = lsp.net.transition(t);
          Num q = p * weight(tr.weight) / total;
          Marking next = fire(lsp.net, m, t);
          bool visible = !tr.label.is_silent();
          if (visible) trace.push_back(tr.label.name());
          walk(next, q, trace, depth + 1);
          if (visible) trace.pop_back();
        }
      };
  Trace trace;
  walk(lsp.initial, Num{1}, trace, 0);
  if (open != nullptr) *open = cut;
  return out;
}

/// Value iteration v <- P v with targets pinned at 1, straight from the
/// edge list. Converges from below to the absorption probabilities.
std::vector<double> value_iteration(const Sts& sts, std::span<const StateIndex> targets,
                                    std::size_t steps = 10'000);

/// Random transition system: `finals` deadlock states, the other states
/// get 1..4 outgoing edges with random probabilities summing to 1.
Sts random_chain(std::mt19937_64& rng, std::size_t states, std::size_t finals);

/// Complement over `alphabet`: totalised with a sink, acceptance flipped.
Dfa complement(const Dfa& dfa, const std::set<std::string>& alphabet);

/// Inserts an immediate silent transition between `t` and its postset
/// place `place` (the arc t -> place becomes t -> fresh -> place).
Lsp insert_silent_step(const Lsp& lsp, TransitionIndex t, PlaceIndex place);

using Rational = boost::multiprecision::cpp_rational;

/// Exact probability, by token game and rational Gaussian elimination, of
/// ending in a final marking accepted by `target`. With `trace` set, only
/// runs inducing exactly that trace count.
Rational exact_probability(const Lsp& lsp, const std::function<bool(const Marking&)>& target,
                           const Trace* trace = nullptr);

/// Same net with every weight multiplied by `factor`.
Lsp scale_weights(const Lsp& lsp, double factor);

}  // namespace slpn::testing
