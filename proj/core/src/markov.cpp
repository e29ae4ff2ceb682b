#include "slpn/markov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "slpn/text.hpp"

namespace slpn {

MarkovChain embed_chain(const Sts& sts) {
  MarkovChain chain;
  chain.state_count = sts.state_count();
  chain.absorbing.assign(sts.state_count(), false);
  for (const auto& e : sts.edges()) {
    chain.edges.push_back({e.source, e.target, e.probability});
  }
  for (auto f : sts.finals()) {
    chain.absorbing[f] = true;
    chain.edges.push_back({f, f, 1.0});
  }
  return chain;
}

LinearSystem assemble_system(const Sts& sts, std::span<const StateIndex> targets) {
  LinearSystem system;
  const auto n = sts.state_count();
  system.kinds.assign(n, RowKind::zeroed);
  system.terms.assign(n, {});
  auto reach = can_reach(sts, targets);
  std::vector<bool> is_target(n, false);
  for (auto t : targets) is_target.at(t) = true;
  for (StateIndex s = 0; s < n; ++s) {
    if (is_target[s]) {
      system.kinds[s] = RowKind::target;
    } else if (reach[s]) {
      system.kinds[s] = RowKind::flow;
      std::map<StateIndex, double> merged;
      for (auto e : sts.outgoing(s)) {
        const auto& edge = sts.edge(e);
        merged[edge.target] += edge.probability;
      }
      system.terms[s].assign(merged.begin(), merged.end());
    }
  }
  return system;
}

namespace {

double flow_residual(const LinearSystem& system, const std::vector<double>& x) {
  double residual = 0.0;
  for (std::size_t s = 0; s < system.size(); ++s) {
    if (system.kinds[s] != RowKind::flow) continue;
    double rhs = 0.0;
    for (auto [t, p] : system.terms[s]) rhs += p * x[t];
    residual = std::max(residual, std::abs(x[s] - rhs));
  }
  return residual;
}

}  // namespace

Solution solve_linear(const LinearSystem& system, const SolveOptions& options) {
  const auto n = system.size();
  Solution solution;
  solution.values.assign(n, 0.0);
  std::vector<std::int64_t> unknown(n, -1);
  std::vector<StateIndex> order;
  for (StateIndex s = 0; s < n; ++s) {
    if (system.kinds[s] == RowKind::target) solution.values[s] = 1.0;
    if (system.kinds[s] == RowKind::flow) {
      unknown[s] = static_cast<std::int64_t>(order.size());
      order.push_back(s);
    }
  }
  const auto k = order.size();
  solution.unknowns = k;

  // b_i collects mass flowing straight into targets.
  std::vector<double> b(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (auto [t, p] : system.terms[order[i]]) {
      if (system.kinds[t] == RowKind::target) b[i] += p;
    }
  }

  if (k == 0) {
    solution.method = SolveMethod::trivial;
  } else if (k <= options.dense_limit) {
    solution.method = SolveMethod::dense_lu;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                                  static_cast<Eigen::Index>(k));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      rhs(static_cast<Eigen::Index>(i)) = b[i];
      for (auto [t, p] : system.terms[order[i]]) {
        if (unknown[t] >= 0) {
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(unknown[t])) -= p;
        }
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd x = lu.solve(rhs);
    for (std::size_t i = 0; i < k; ++i) {
      solution.values[order[i]] = x(static_cast<Eigen::Index>(i));
    }
    solution.iterations = 1;
  } else {
    solution.method = SolveMethod::gauss_seidel;
    auto& x = solution.values;
    bool converged = false;
    std::size_t sweep = 0;
    while (sweep < options.max_sweeps) {
      ++sweep;
      double max_update = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        StateIndex s = order[i];
        double self = 0.0;
        double acc = b[i];
        for (auto [t, p] : system.terms[s]) {
          if (t == s) {
            self += p;
          } else if (unknown[t] >= 0) {
            acc += p * x[t];
          }
        }
        if (!(self < 1.0)) throw SolverError("singular flow system");
        double next = acc / (1.0 - self);
        max_update = std::max(max_update, std::abs(next - x[s]));
        x[s] = next;
      }
      if (max_update < options.tolerance) {
        converged = true;
        break;
      }
    }
    solution.iterations = sweep;
    if (!converged) {
      throw SolverError("Gauss-Seidel did not converge within " +
                        std::to_string(options.max_sweeps) + " sweeps");
    }
  }

  for (auto& v : solution.values) {
    if (!std::isfinite(v)) throw SolverError("non-finite solution entry");
    if (v < 0.0) {
      if (v < -1e-6) throw SolverError("solution entry " + text::format_double(v) + " below 0");
      v = 0.0;
    } else if (v > 1.0) {
      if (v > 1.0 + 1e-6) throw SolverError("solution entry " + text::format_double(v) + " above 1");
      v = 1.0;
    }
  }
  solution.residual = flow_residual(system, solution.values);
  if (solution.residual > 1e-6) {
    throw SolverError("flow system residual " + text::format_double(solution.residual) +
                      " too large");
  }
  return solution;
}

Solution state_values(const Sts& sts, std::span<const StateIndex> targets,
                      const SolveOptions& options) {
  for (auto t : targets) {
    if (t >= sts.state_count()) throw Error("target state out of range");
    if (!sts.is_final(t)) throw Error("target state " + std::to_string(t) + " is not final");
  }
  return solve_linear(assemble_system(sts, targets), options);
}

double absorbed_mass(const Sts& sts, const SolveOptions& options) {
  auto finals = sts.finals();
  if (finals.empty()) return 0.0;
  return state_values(sts, finals, options).values[sts.initial()];
}

double outcome_probability(const Lsp& lsp, std::span<const Marking> targets,
                           const ReachabilityOptions& reachability,
                           const SolveOptions& options, Diagnostics* diagnostics) {
  if (targets.empty()) throw Error("no target markings given");
  if (!lsp.complete_finals) {
    for (const auto& t : targets) {
      if (std::find(lsp.finals.begin(), lsp.finals.end(), t) == lsp.finals.end()) {
        throw Error("target " + t.to_string(lsp.net) + " is not a final marking");
      }
    }
  }
  auto sts = build_reachability_graph(lsp, reachability, diagnostics);
  std::vector<StateIndex> states;
  for (const auto& t : targets) {
    StateIndex found = kNoState;
    for (StateIndex s = 0; s < sts.state_count(); ++s) {
      if (sts.state(s).marking == t) {
        found = s;
        break;
      }
    }
    if (found == kNoState) {
      warn(diagnostics, "target " + t.to_string(lsp.net) + " is unreachable");
      continue;
    }
    if (!sts.is_final(found)) {
      throw Error("target " + t.to_string(lsp.net) + " is not a final marking");
    }
    if (std::find(states.begin(), states.end(), found) == states.end()) {
      states.push_back(found);
    }
  }
  if (states.empty()) return 0.0;
  return state_values(sts, states, options).values[sts.initial()];
}

double livelock_mass(const Lsp& lsp, const ReachabilityOptions& reachability,
                     const SolveOptions& options) {
  auto sts = build_reachability_graph(lsp, reachability);
  return 1.0 - absorbed_mass(sts, options);
}

std::string format_system(const LinearSystem& system) {
  std::ostringstream out;
  for (std::size_t s = 0; s < system.size(); ++s) {
    out << "x_" << s << " = ";
    switch (system.kinds[s]) {
      case RowKind::target:
        out << "1";
        break;
      case RowKind::zeroed:
        out << "0";
        break;
      case RowKind::flow: {
        bool first = true;
        for (auto [t, p] : system.terms[s]) {
          if (!first) out << " + ";
          first = false;
          out << text::format_double(p) << "*x_" << t;
        }
        break;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace slpn
