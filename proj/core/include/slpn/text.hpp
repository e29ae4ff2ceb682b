#pragma once

// Small line-oriented text helpers shared by the file-format readers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slpn::text {

struct Token {
  std::string value;
  bool quoted = false;
};

/// Splits one line into whitespace-separated tokens. Double-quoted tokens may
/// contain spaces; `\"` and `\\` are the only escapes. An unquoted `#` starts a
/// comment. Throws ParseError on an unterminated quote.
std::vector<Token> tokenize(std::string_view line, std::size_t line_number);

/// Splits `input` into lines, accepting both LF and CRLF endings.
std::vector<std::string_view> lines(std::string_view input);

std::string_view trim(std::string_view s);

/// Splits on `sep`, honouring double quotes (quotes are removed).
std::vector<std::string> split_quoted(std::string_view s, char sep,
                                      std::size_t line_number);

bool is_identifier(std::string_view s);

/// Positive decimal or `p/q` fraction with integer p, q > 0.
std::optional<double> parse_positive_weight(std::string_view s);

/// Decimal or `p/q` in [0, 1].
std::optional<double> parse_probability(std::string_view s);

std::optional<std::uint64_t> parse_unsigned(std::string_view s);

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point rendering with `digits` decimals.
std::string format_fixed(double value, int digits);

/// Quotes `s` if it is not a plain identifier-like token.
std::string quote_if_needed(std::string_view s);

}  // namespace slpn::text
