#include "slpn/log.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <sstream>

#include "slpn/text.hpp"

namespace slpn {

void StochasticLog::add(const Trace& trace, std::uint64_t count) {
  if (count == 0) throw Error("trace count must be positive");
  entries_[trace] += count;
  total_ += count;
}

std::uint64_t StochasticLog::count(const Trace& trace) const {
  auto it = entries_.find(trace);
  return it == entries_.end() ? 0 : it->second;
}

double StochasticLog::likelihood(const Trace& trace) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(count(trace)) / static_cast<double>(total_);
}

namespace {

std::string checked_label(std::string label, const LogOptions& options, std::size_t line) {
  if (options.trim) label = std::string(text::trim(label));
  if (label.empty()) throw ParseError(line, "empty activity label");
  if (label == kSilentToken) throw ParseError(line, "'tau' is not an activity label");
  return label;
}

}  // namespace

StochasticLog parse_log_csv(std::string_view input, const LogOptions& options) {
  StochasticLog log;
  std::size_t line_no = 0;
  for (auto raw : text::lines(input)) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto semi = line.find(';');
    if (semi == std::string_view::npos) {
      throw ParseError(line_no, "expected '<count> ; <labels>'");
    }
    auto count_text = text::trim(line.substr(0, semi));
    auto count = text::parse_unsigned(count_text);
    if (!count) throw ParseError(line_no, "malformed count '" + std::string(count_text) + "'");
    if (*count == 0) throw ParseError(line_no, "count must be positive");
    auto rest = text::trim(line.substr(semi + 1));
    Trace trace;
    if (!rest.empty()) {
      for (auto& part : text::split_quoted(rest, ',', line_no)) {
        trace.push_back(checked_label(std::move(part), options, line_no));
      }
    }
    log.add(trace, *count);
  }
  return log;
}

std::string write_log_csv(const StochasticLog& log) {
  std::ostringstream out;
  for (const auto& [trace, count] : log.entries()) {
    out << count << " ;";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out << (i == 0 ? " " : ",") << text::quote_if_needed(trace[i]);
    }
    out << '\n';
  }
  return out.str();
}

StochasticLog parse_xes(std::string_view input, const LogOptions& options,
                        Diagnostics* diagnostics) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream stream{std::string(input)};
  try {
    pt::read_xml(stream, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.line(), "XML: " + e.message());
  }
  auto root = tree.get_child_optional("log");
  if (!root) throw Error("no <log> element");
  StochasticLog log;
  std::size_t skipped = 0;
  for (const auto& [tag, trace_node] : *root) {
    if (tag != "trace") continue;
    Trace trace;
    for (const auto& [event_tag, event] : trace_node) {
      if (event_tag != "event") continue;
      std::optional<std::string> name;
      for (const auto& [attr_tag, attr] : event) {
        if (attr_tag != "string") continue;
        if (attr.get<std::string>("<xmlattr>.key", "") != "concept:name") continue;
        name = attr.get<std::string>("<xmlattr>.value", "");
        break;
      }
      if (!name || name->empty()) {
        ++skipped;
        continue;
      }
      trace.push_back(checked_label(*name, options, 0));
    }
    log.add(trace);
  }
  if (log.total() == 0) throw Error("no traces found");
  if (skipped > 0) {
    warn(diagnostics, std::to_string(skipped) + " event(s) without concept:name skipped");
  }
  return log;
}

}  // namespace slpn
