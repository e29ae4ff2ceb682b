#include "slpn/probdeclare.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slpn/text.hpp"

namespace slpn {

namespace {

constexpr double kSlack = 1e-9;

}  // namespace

std::string_view to_string(Comparison op) {
  switch (op) {
    case Comparison::eq: return "=";
    case Comparison::ne: return "!=";
    case Comparison::le: return "<=";
    case Comparison::ge: return ">=";
    case Comparison::lt: return "<";
    case Comparison::gt: return ">";
  }
  return "?";
}

Comparison parse_comparison(std::string_view s) {
  if (s == "=") return Comparison::eq;
  if (s == "!=") return Comparison::ne;
  if (s == "<=") return Comparison::le;
  if (s == ">=") return Comparison::ge;
  if (s == "<") return Comparison::lt;
  if (s == ">") return Comparison::gt;
  throw Error("unknown operator '" + std::string(s) + "'");
}

bool holds(double value, Comparison op, double p) {
  switch (op) {
    case Comparison::eq: return std::abs(value - p) <= kSlack;
    case Comparison::ne: return std::abs(value - p) > kSlack;
    case Comparison::le: return value <= p + kSlack;
    case Comparison::ge: return value >= p - kSlack;
    case Comparison::lt: return value < p;
    case Comparison::gt: return value > p;
  }
  return false;
}

Dfa template_to_dfa(std::string_view name, const std::vector<std::string>& args,
                    const std::set<std::string>& alphabet) {
  static const std::set<std::string_view> unary = {"existence", "absence"};
  static const std::set<std::string_view> binary = {
      "response", "precedence", "coexistence", "not-coexistence", "eventually-then"};
  std::size_t arity = 0;
  if (unary.count(name)) {
    arity = 1;
  } else if (binary.count(name)) {
    arity = 2;
  } else {
    throw Error("unknown template '" + std::string(name) + "'");
  }
  if (args.size() != arity) {
    throw Error("template '" + std::string(name) + "' takes " + std::to_string(arity) +
                " argument(s), got " + std::to_string(args.size()));
  }
  for (const auto& a : args) {
    if (!alphabet.count(a)) throw Error("argument '" + a + "' is not in the alphabet");
  }
  if (arity == 2 && args[0] == args[1]) {
    throw Error("template '" + std::string(name) + "' needs two distinct activities");
  }

  Dfa dfa;
  for (const auto& a : alphabet) dfa.add_symbol(a);
  const Label a = Label::activity(args[0]);
  const Label b = arity == 2 ? Label::activity(args[1]) : Label{};

  if (name == "existence") {
    auto s0 = dfa.add_state("s0");
    auto s1 = dfa.add_state("s1", true);
    dfa.add_transition(s0, a, s1);
    dfa.set_fallback(s0, s0);
    dfa.set_fallback(s1, s1);
  } else if (name == "absence") {
    auto s0 = dfa.add_state("s0", true);
    auto dead = dfa.add_state("dead");
    dfa.add_transition(s0, a, dead);
    dfa.set_fallback(s0, s0);
    dfa.set_fallback(dead, dead);
  } else if (name == "response") {
    auto s0 = dfa.add_state("s0", true);
    auto s1 = dfa.add_state("s1");
    dfa.add_transition(s0, a, s1);
    dfa.set_fallback(s0, s0);
    dfa.add_transition(s1, b, s0);
    dfa.set_fallback(s1, s1);
  } else if (name == "precedence") {
    auto s0 = dfa.add_state("s0", true);
    auto s1 = dfa.add_state("s1", true);
    auto dead = dfa.add_state("dead");
    dfa.add_transition(s0, a, s1);
    dfa.add_transition(s0, b, dead);
    dfa.set_fallback(s0, s0);
    dfa.set_fallback(s1, s1);
    dfa.set_fallback(dead, dead);
  } else if (name == "not-coexistence") {
    auto s0 = dfa.add_state("s0", true);
    auto sa = dfa.add_state("sa", true);
    auto sb = dfa.add_state("sb", true);
    auto dead = dfa.add_state("dead");
    dfa.add_transition(s0, a, sa);
    dfa.add_transition(s0, b, sb);
    dfa.set_fallback(s0, s0);
    dfa.add_transition(sa, b, dead);
    dfa.set_fallback(sa, sa);
    dfa.add_transition(sb, a, dead);
    dfa.set_fallback(sb, sb);
    dfa.set_fallback(dead, dead);
  } else if (name == "coexistence") {
    auto s0 = dfa.add_state("s0", true);
    auto sa = dfa.add_state("sa");
    auto sb = dfa.add_state("sb");
    auto both = dfa.add_state("both", true);
    dfa.add_transition(s0, a, sa);
    dfa.add_transition(s0, b, sb);
    dfa.set_fallback(s0, s0);
    dfa.add_transition(sa, b, both);
    dfa.set_fallback(sa, sa);
    dfa.add_transition(sb, a, both);
    dfa.set_fallback(sb, sb);
    dfa.set_fallback(both, both);
  } else {  // eventually-then
    auto s0 = dfa.add_state("s0");
    auto s1 = dfa.add_state("s1");
    auto s2 = dfa.add_state("s2", true);
    dfa.add_transition(s0, a, s1);
    dfa.set_fallback(s0, s0);
    dfa.add_transition(s1, b, s2);
    dfa.set_fallback(s1, s1);
    dfa.set_fallback(s2, s2);
  }
  dfa.set_initial(0);
  return dfa;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Splits `rest` at the `)` closing the template call, honouring quotes.
std::size_t closing_paren(std::string_view rest, std::size_t line) {
  bool quoted = false;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    char c = rest[i];
    if (quoted) {
      if (c == '\\' && i + 1 < rest.size()) {
        ++i;
      } else if (c == '"') {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ')') {
      return i;
    }
  }
  throw ParseError(line, "missing ')'");
}

double parse_threshold(const std::string& s, std::size_t line) {
  auto p = text::parse_probability(s);
  if (!p) throw ParseError(line, "probability '" + s + "' is not a number in [0,1]");
  return *p;
}

}  // namespace

ProbDeclareSpec parse_probdeclare(std::string_view input, const std::string& base_dir) {
  ProbDeclareSpec spec;
  std::set<std::string> names;
  struct Pending {
    std::size_t line;
    std::string name;
    std::string kind;  // template name, or "dfa"
    std::vector<std::string> args;
    Comparison op;
    double p;
  };
  std::vector<Pending> pending;
  std::size_t line_no = 0;
  for (auto raw : text::lines(input)) {
    ++line_no;
    auto tokens = text::tokenize(raw, line_no);
    if (tokens.empty()) continue;
    if (tokens[0].value == "alphabet") {
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto& a = tokens[i].value;
        if (a.empty() || a == kSilentToken) {
          throw ParseError(line_no, "invalid alphabet symbol '" + a + "'");
        }
        spec.alphabet.insert(a);
      }
      continue;
    }
    if (tokens[0].value != "constraint") {
      throw ParseError(line_no, "unknown directive '" + tokens[0].value + "'");
    }
    if (tokens.size() < 3) throw ParseError(line_no, "incomplete constraint");
    if (!text::is_identifier(tokens[1].value)) {
      throw ParseError(line_no, "invalid constraint name '" + tokens[1].value + "'");
    }
    Pending c{line_no, tokens[1].value, {}, {}, Comparison::eq, 0.0};
    if (!names.insert(c.name).second) {
      throw ParseError(line_no, "duplicate constraint name '" + c.name + "'");
    }
    auto expect_tail = [&](const std::vector<text::Token>& tail) {
      if (tail.size() != 2) throw ParseError(line_no, "expected '<op> <p>' after the formula");
      try {
        c.op = parse_comparison(tail[0].value);
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
      c.p = parse_threshold(tail[1].value, line_no);
    };
    if (tokens[2].value == "dfa" && !tokens[2].quoted) {
      if (tokens.size() != 6) throw ParseError(line_no, "expected: constraint <name> dfa <path> <op> <p>");
      c.kind = "dfa";
      c.args = {tokens[3].value};
      expect_tail({tokens[4], tokens[5]});
    } else {
      // Re-scan the raw line: template arguments may contain spaces.
      auto name_at = raw.find(tokens[1].value, raw.find("constraint") + 10);
      auto body = raw.substr(name_at + tokens[1].value.size());
      auto open = body.find('(');
      if (open == std::string_view::npos) throw ParseError(line_no, "expected '<template>(<args>)'");
      c.kind = std::string(text::trim(body.substr(0, open)));
      auto inner = body.substr(open + 1);
      auto close = closing_paren(inner, line_no);
      auto args_text = inner.substr(0, close);
      if (!text::trim(args_text).empty()) {
        for (auto& part : text::split_quoted(args_text, ',', line_no)) {
          c.args.emplace_back(text::trim(part));
        }
      }
      expect_tail(text::tokenize(inner.substr(close + 1), line_no));
    }
    pending.push_back(std::move(c));
  }

  for (auto& c : pending) {
    ProbabilisticConstraint constraint;
    constraint.name = c.name;
    constraint.op = c.op;
    constraint.probability = c.p;
    try {
      if (c.kind == "dfa") {
        auto path = std::filesystem::path(c.args[0]);
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        constraint.dfa = parse_dfa(read_file(path));
        constraint.formula = "dfa " + c.args[0];
      } else {
        constraint.dfa = template_to_dfa(c.kind, c.args, spec.alphabet);
        std::string call = c.kind + "(";
        for (std::size_t i = 0; i < c.args.size(); ++i) {
          call += (i ? "," : "") + text::quote_if_needed(c.args[i]);
        }
        constraint.formula = call + ")";
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(c.line, e.what());
    }
    spec.constraints.push_back(std::move(constraint));
  }
  return spec;
}

ComplianceReport check_compliance(const Lsp& lsp, const ProbDeclareSpec& spec,
                                  const AnalysisOptions& options, Diagnostics* diagnostics) {
  auto rg = build_reachability_graph(lsp, options.reachability, diagnostics);
  ComplianceReport report;
  report.rg_states = rg.state_count();
  report.language_mass = absorbed_mass(rg, options.solve);
  if (report.language_mass < 1.0 - kSlack) {
    warn(diagnostics, "livelock mass " + text::format_double(1.0 - report.language_mass) +
                          ": the model does not induce a stochastic language");
  }
  for (const auto& c : spec.constraints) {
    ConstraintResult r;
    r.name = c.name;
    r.formula = c.formula;
    r.op = c.op;
    r.probability = c.probability;
    r.value = spec_probability(rg, c.dfa, options, nullptr).value;
    r.holds = holds(r.value, c.op, c.probability);
    report.overall = report.overall && r.holds;
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace slpn
