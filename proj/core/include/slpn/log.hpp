#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "slpn/error.hpp"
#include "slpn/net.hpp"

namespace slpn {

/// Finite multiset of traces. Distinct traces are kept in lexicographic order.
class StochasticLog {
 public:
  /// Throws Error on a zero count.
  void add(const Trace& trace, std::uint64_t count = 1);

  const std::map<Trace, std::uint64_t>& entries() const noexcept { return entries_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return entries_.size(); }
  std::uint64_t count(const Trace& trace) const;
  /// count / total, 0 for an empty log.
  double likelihood(const Trace& trace) const;

  bool operator==(const StochasticLog&) const = default;

 private:
  std::map<Trace, std::uint64_t> entries_;
  std::uint64_t total_ = 0;
};

struct LogOptions {
  /// Strip surrounding whitespace from every activity label.
  bool trim = false;
};

/// Lines `<count> ; <label>[,<label>...]`, or `<count> ;` for the empty
/// trace. Labels containing commas, semicolons or quotes are double-quoted.
StochasticLog parse_log_csv(std::string_view text, const LogOptions& options = {});
std::string write_log_csv(const StochasticLog& log);

/// Minimal XES reader: one entry per `<trace>`, activities from each event's
/// `concept:name` string attribute.
StochasticLog parse_xes(std::string_view text, const LogOptions& options = {},
                        Diagnostics* diagnostics = nullptr);

}  // namespace slpn
