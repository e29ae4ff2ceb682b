// slpn: command-line front end for the analysis library.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "slpn/analysis.hpp"
#include "slpn/automata.hpp"
#include "slpn/conformance.hpp"
#include "slpn/log.hpp"
#include "slpn/markov.hpp"
#include "slpn/net.hpp"
#include "slpn/oracle.hpp"
#include "slpn/probdeclare.hpp"
#include "slpn/reachability.hpp"
#include "slpn/text.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Shared {
  std::size_t max_states = 1'000'000;
  double tolerance = 1e-12;
  double epsilon = 1e-9;
  std::uint64_t max_steps = 10'000'000;
  bool oracle = false;
  std::string format = "text";
  int digits = 9;
};

struct Args {
  std::string net;
  std::vector<std::string> finals;
  std::string trace;
  std::string dfa;
  std::string spec;
  std::string log;
  bool xes = false;
  bool trim = false;
  unsigned threads = 1;
  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t max_len = 1000;
  std::string what = "dot";
};

class Report {
 public:
  Report(const Shared& shared, std::string command) : shared_(shared) {
    doc_["command"] = std::move(command);
    doc_["inputs"] = json::object();
    doc_["results"] = json::object();
  }

  bool json_mode() const { return shared_.format == "json"; }
  json& inputs() { return doc_["inputs"]; }
  json& results() { return doc_["results"]; }
  slpn::Diagnostics* diagnostics() { return &diagnostics_; }

  std::string fixed(double v) const { return slpn::text::format_fixed(v, shared_.digits); }
  json number(double v) const { return std::stod(fixed(v)); }

  void line(const std::string& s) { text_ << s << '\n'; }

  void finish(double seconds) {
    for (const auto& d : diagnostics_) {
      std::cerr << (d.severity == slpn::Diagnostic::Severity::error ? "error: " : "warning: ")
                << d.message << '\n';
    }
    if (json_mode()) {
      json diags = json::array();
      for (const auto& d : diagnostics_) {
        diags.push_back({{"severity", d.severity == slpn::Diagnostic::Severity::error ? "error" : "warning"},
                         {"message", d.message}});
      }
      doc_["diagnostics"] = diags;
      doc_["timings"] = {{"wall_seconds", seconds}};
      std::cout << doc_.dump(2) << '\n';
    } else {
      std::cout << text_.str();
    }
  }

 private:
  const Shared& shared_;
  json doc_;
  std::ostringstream text_;
  slpn::Diagnostics diagnostics_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw slpn::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

slpn::Lsp load_net(const std::string& path) {
  try {
    return slpn::parse_slpn(read_file(path));
  } catch (const slpn::ParseError& e) {
    throw slpn::Error(path + ": " + e.what());
  }
}

slpn::AnalysisOptions analysis_options(const Shared& s) {
  slpn::AnalysisOptions o;
  o.reachability.max_states = s.max_states;
  o.solve.tolerance = s.tolerance;
  o.oracle = s.oracle;
  o.bracket.epsilon = s.epsilon;
  o.bracket.max_steps = s.max_steps;
  return o;
}

slpn::Trace parse_trace_arg(const std::string& arg) {
  slpn::Trace trace;
  if (slpn::text::trim(arg).empty()) return trace;
  for (auto& part : slpn::text::split_quoted(arg, ',', 0)) {
    if (part.empty() || part == slpn::kSilentToken) {
      throw UsageError("invalid activity '" + part + "' in --trace");
    }
    trace.push_back(std::move(part));
  }
  return trace;
}

std::string trace_text(const slpn::Trace& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + slpn::text::quote_if_needed(t[i]);
  }
  return out + ">";
}

void add_result(Report& r, const slpn::AnalysisResult& res) {
  auto& j = r.results();
  j["value"] = r.number(res.value);
  j["rg_states"] = res.rg_states;
  j["product_states"] = res.product_states;
  j["residual"] = res.residual;
  r.line(r.fixed(res.value));
  if (res.bracket) {
    j["bracket"] = {{"lower", r.number(res.bracket->lower)},
                    {"upper", r.number(res.bracket->upper())},
                    {"steps", res.bracket->steps}};
    r.line("bracket [" + r.fixed(res.bracket->lower) + ", " + r.fixed(res.bracket->upper()) +
           "] after " + std::to_string(res.bracket->steps) + " steps");
  }
}

int cmd_inspect(const Shared& s, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  for (const auto& d : slpn::validate(lsp)) r.diagnostics()->push_back(d);
  auto opts = analysis_options(s);
  auto rg = slpn::build_reachability_graph(lsp, opts.reachability, r.diagnostics());
  auto stats = slpn::graph_stats(rg);
  auto mass = slpn::language_mass(rg, opts);
  std::size_t live = stats.states - stats.deadlocks - stats.livelocks;
  r.inputs()["net"] = a.net;
  auto& j = r.results();
  j["places"] = lsp.net.place_count();
  j["transitions"] = lsp.net.transition_count();
  j["states"] = stats.states;
  j["edges"] = stats.edges;
  j["finals"] = stats.finals;
  j["deadlocks"] = stats.deadlocks;
  j["livelocks"] = stats.livelocks;
  j["live"] = live;
  j["unboundedness_suspected"] = stats.unboundedness_suspected;
  j["language_mass"] = r.number(mass.value);
  if (mass.bracket) {
    j["bracket"] = {{"lower", r.number(mass.bracket->lower)},
                    {"upper", r.number(mass.bracket->upper())},
                    {"steps", mass.bracket->steps}};
  }
  r.line(std::to_string(stats.states) + " states, " + std::to_string(stats.finals) +
         " final, " + std::to_string(stats.livelocks) + " livelock, language mass " +
         r.fixed(mass.value));
  r.line(std::to_string(lsp.net.place_count()) + " places, " +
         std::to_string(lsp.net.transition_count()) + " transitions, " +
         std::to_string(stats.edges) + " edges, " + std::to_string(stats.deadlocks) +
         " deadlock, " + std::to_string(live) + " live");
  if (mass.bracket) {
    r.line("bracket [" + r.fixed(mass.bracket->lower) + ", " + r.fixed(mass.bracket->upper()) +
           "] after " + std::to_string(mass.bracket->steps) + " steps");
  }
  return kExitOk;
}

int cmd_outcome(const Shared& s, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  std::vector<slpn::Marking> targets;
  for (const auto& f : a.finals) {
    try {
      targets.push_back(slpn::parse_marking(lsp.net, f));
    } catch (const slpn::ParseError& e) {
      throw UsageError("--final '" + f + "': " + e.what());
    }
  }
  auto opts = analysis_options(s);
  auto rg = slpn::build_reachability_graph(lsp, opts.reachability, r.diagnostics());
  std::vector<slpn::StateIndex> states;
  for (const auto& t : targets) {
    if (!lsp.complete_finals &&
        std::find(lsp.finals.begin(), lsp.finals.end(), t) == lsp.finals.end()) {
      throw slpn::Error("target " + t.to_string(lsp.net) + " is not a final marking");
    }
    slpn::StateIndex found = slpn::kNoState;
    for (slpn::StateIndex i = 0; i < rg.state_count(); ++i) {
      if (rg.state(i).marking == t) found = i;
    }
    if (found == slpn::kNoState) {
      slpn::warn(r.diagnostics(), "target " + t.to_string(lsp.net) + " is unreachable");
      continue;
    }
    if (!rg.is_final(found)) {
      throw slpn::Error("target " + t.to_string(lsp.net) + " is not a final marking");
    }
    states.push_back(found);
  }
  slpn::AnalysisResult res;
  res.rg_states = rg.state_count();
  if (!states.empty()) {
    auto sol = slpn::state_values(rg, states, opts.solve);
    res.value = sol.values[rg.initial()];
    res.residual = sol.residual;
  }
  if (s.oracle) res.bracket = slpn::enumerate_bracket(rg, states, opts.bracket);
  r.inputs()["net"] = a.net;
  r.inputs()["finals"] = a.finals;
  add_result(r, res);
  return kExitOk;
}

int cmd_trace_prob(const Shared& s, const Args& a, Report& r) {
  auto trace = parse_trace_arg(a.trace);
  auto lsp = load_net(a.net);
  auto res = slpn::trace_probability(lsp, trace, analysis_options(s), r.diagnostics());
  r.inputs()["net"] = a.net;
  r.inputs()["trace"] = trace;
  add_result(r, res);
  return kExitOk;
}

int cmd_spec_prob(const Shared& s, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  slpn::Dfa dfa;
  try {
    dfa = slpn::parse_dfa(read_file(a.dfa));
  } catch (const slpn::ParseError& e) {
    throw slpn::Error(a.dfa + ": " + e.what());
  }
  auto res = slpn::spec_probability(lsp, dfa, analysis_options(s), r.diagnostics());
  r.inputs()["net"] = a.net;
  r.inputs()["dfa"] = a.dfa;
  add_result(r, res);
  return kExitOk;
}

int cmd_compliance(const Shared& s, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  slpn::ProbDeclareSpec spec;
  try {
    auto base = std::filesystem::path(a.spec).parent_path().string();
    spec = slpn::parse_probdeclare(read_file(a.spec), base.empty() ? "." : base);
  } catch (const slpn::ParseError& e) {
    throw slpn::Error(a.spec + ": " + e.what());
  }
  auto opts = analysis_options(s);
  auto report = slpn::check_compliance(lsp, spec, opts, r.diagnostics());
  r.inputs()["net"] = a.net;
  r.inputs()["spec"] = a.spec;
  json rows = json::array();
  for (const auto& c : report.results) {
    rows.push_back({{"name", c.name},
                    {"formula", c.formula},
                    {"operator", std::string(slpn::to_string(c.op))},
                    {"threshold", c.probability},
                    {"value", r.number(c.value)},
                    {"holds", c.holds}});
    r.line(c.name + " " + c.formula + " " + std::string(slpn::to_string(c.op)) + " " +
           slpn::text::format_double(c.probability) + ": " + r.fixed(c.value) + " " +
           (c.holds ? "holds" : "fails"));
  }
  r.results()["constraints"] = rows;
  r.results()["language_mass"] = r.number(report.language_mass);
  r.results()["compliant"] = report.overall;
  r.line(std::string("compliant: ") + (report.overall ? "yes" : "no"));
  return kExitOk;
}

int cmd_uemsc(const Shared& s, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  slpn::LogOptions log_opts;
  log_opts.trim = a.trim;
  slpn::StochasticLog log;
  try {
    auto content = read_file(a.log);
    log = a.xes ? slpn::parse_xes(content, log_opts, r.diagnostics())
                : slpn::parse_log_csv(content, log_opts);
  } catch (const slpn::ParseError& e) {
    throw slpn::Error(a.log + ": " + e.what());
  }
  slpn::UemscOptions opts;
  opts.analysis = analysis_options(s);
  opts.analysis.oracle = false;
  opts.threads = a.threads;
  auto report = slpn::uemsc(log, lsp, opts, r.diagnostics());
  r.inputs()["net"] = a.net;
  r.inputs()["log"] = a.log;
  r.results()["value"] = r.number(report.value);
  r.results()["traces"] = log.total();
  r.results()["distinct"] = log.distinct();
  r.results()["rg_states"] = report.rg_states;
  json rows = json::array();
  r.line(r.fixed(report.value));
  for (const auto& row : report.rows) {
    rows.push_back({{"trace", row.trace},
                    {"count", row.count},
                    {"log", r.number(row.log_probability)},
                    {"model", r.number(row.model_probability)},
                    {"contribution", r.number(row.contribution)}});
    r.line(trace_text(row.trace) + " " + r.fixed(row.log_probability) + " " +
           r.fixed(row.model_probability) + " " + r.fixed(row.contribution));
  }
  r.results()["rows"] = rows;
  return kExitOk;
}

int cmd_sample(const Shared&, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  if (a.n == 0) throw UsageError("--n must be at least 1");
  slpn::PlayoutOptions opts{a.n, a.seed, a.max_len};
  auto result = slpn::sample_playout(lsp, opts);
  r.inputs()["net"] = a.net;
  r.inputs()["n"] = a.n;
  r.inputs()["seed"] = a.seed;
  r.inputs()["max_len"] = a.max_len;
  json entries = json::array();
  for (const auto& [trace, count] : result.log.entries()) {
    entries.push_back({{"trace", trace}, {"count", count}});
  }
  r.results()["log"] = entries;
  r.results()["accepted"] = result.log.total();
  r.results()["truncated"] = result.truncated;
  r.results()["stuck"] = result.stuck;
  if (result.truncated > 0) {
    slpn::warn(r.diagnostics(), std::to_string(result.truncated) + " trace(s) truncated at " +
                                    std::to_string(a.max_len) + " firings");
  }
  if (result.stuck > 0) {
    slpn::warn(r.diagnostics(),
               std::to_string(result.stuck) + " trace(s) ended in a non-final deadlock");
  }
  std::string csv = slpn::write_log_csv(result.log);
  if (!csv.empty()) csv.pop_back();
  if (!csv.empty()) r.line(csv);
  return kExitOk;
}

int cmd_export(const Shared& s, const Args& a, Report& r) {
  auto lsp = load_net(a.net);
  auto opts = analysis_options(s);
  auto rg = slpn::build_reachability_graph(lsp, opts.reachability, r.diagnostics());
  slpn::Sts sys = rg;
  if (!a.dfa.empty()) {
    auto dfa = slpn::parse_dfa(read_file(a.dfa));
    auto prod = slpn::product(rg, dfa.silenced() ? dfa : slpn::silence(dfa));
    sys = a.what == "system" ? prod : slpn::complete_product(prod, rg);
  }
  std::string out;
  if (a.what == "dot") {
    out = slpn::to_dot(sys, &lsp.net);
  } else if (a.what == "edges") {
    out = slpn::to_edge_list(sys, &lsp.net);
  } else {
    out = slpn::format_system(slpn::assemble_system(sys, sys.finals()));
  }
  r.inputs()["net"] = a.net;
  r.results()[a.what] = out;
  if (!out.empty() && out.back() == '\n') out.pop_back();
  r.line(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of labelled stochastic Petri nets"};
  app.require_subcommand(1);
  Shared shared;
  Args args;

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--max-states", shared.max_states, "Reachability state cap")
        ->envname("SLPN_MAX_STATES")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tolerance", shared.tolerance, "Solver convergence tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", shared.epsilon, "Oracle frontier threshold")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", shared.max_steps, "Oracle expansion budget");
    sub->add_flag("--oracle", shared.oracle, "Cross-check with an enumeration bracket");
    sub->add_option("--format", shared.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--digits", shared.digits, "Decimal digits for probabilities")
        ->check(CLI::Range(0, 17));
  };
  auto add_net = [&](CLI::App* sub) {
    sub->add_option("net", args.net, "Net file (.slpn)")->required();
  };

  auto* inspect = app.add_subcommand("inspect", "Reachability statistics and language mass");
  add_net(inspect);
  add_shared(inspect);

  auto* outcome = app.add_subcommand("outcome", "Probability of ending in the given finals");
  add_net(outcome);
  outcome->add_option("--final", args.finals, "Target marking place:mult[,place:mult...]")
      ->required();
  add_shared(outcome);

  auto* trace = app.add_subcommand("trace-prob", "Probability of a trace");
  add_net(trace);
  trace->add_option("--trace", args.trace, "Comma-separated activities")->required();
  add_shared(trace);

  auto* spec = app.add_subcommand("spec-prob", "Probability of the language of a DFA");
  add_net(spec);
  spec->add_option("--dfa", args.dfa, "Automaton file")->required();
  add_shared(spec);

  auto* compliance = app.add_subcommand("compliance", "Check a probabilistic Declare spec");
  add_net(compliance);
  compliance->add_option("--spec", args.spec, "Specification file")->required();
  add_shared(compliance);

  auto* conf = app.add_subcommand("uemsc", "Unit Earth Movers' stochastic conformance");
  add_net(conf);
  conf->add_option("--log", args.log, "Log file (CSV, or XES with --xes)")->required();
  conf->add_flag("--xes", args.xes, "Read the log as XES");
  conf->add_flag("--trim", args.trim, "Strip whitespace around activity labels");
  conf->add_option("--threads", args.threads, "Worker threads (0 = all cores)");
  add_shared(conf);

  auto* sample = app.add_subcommand("sample", "Play out the net and print a log");
  add_net(sample);
  sample->add_option("--n", args.n, "Number of play-outs");
  sample->add_option("--seed", args.seed, "Generator seed");
  sample->add_option("--max-len", args.max_len, "Firing budget per play-out");
  add_shared(sample);

  auto* exp = app.add_subcommand("export", "Dump the reachability graph or product");
  add_net(exp);
  exp->add_option("--what", args.what, "dot, edges or system")
      ->check(CLI::IsMember({"dot", "edges", "system"}));
  exp->add_option("--dfa", args.dfa, "Build the product with this automaton first");
  add_shared(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  auto* sub = app.get_subcommands().front();
  Report report(shared, sub->get_name());
  auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    const std::string name = sub->get_name();
    if (name == "inspect") code = cmd_inspect(shared, args, report);
    else if (name == "outcome") code = cmd_outcome(shared, args, report);
    else if (name == "trace-prob") code = cmd_trace_prob(shared, args, report);
    else if (name == "spec-prob") code = cmd_spec_prob(shared, args, report);
    else if (name == "compliance") code = cmd_compliance(shared, args, report);
    else if (name == "uemsc") code = cmd_uemsc(shared, args, report);
    else if (name == "sample") code = cmd_sample(shared, args, report);
    else code = cmd_export(shared, args, report);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const slpn::StateCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!e.witness().empty()) {
      std::string path;
      for (const auto& t : e.witness()) path += (path.empty() ? "" : " ") + t;
      std::cerr << "witness: " << path << '\n';
    }
    for (const auto& d : *report.diagnostics()) std::cerr << "warning: " << d.message << '\n';
    return kExitAnalysis;
  } catch (const std::exception& e) {
    for (const auto& d : *report.diagnostics()) std::cerr << "warning: " << d.message << '\n';
    std::cerr << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
  report.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return code;
}
