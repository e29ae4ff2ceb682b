#include "slpn/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "slpn/error.hpp"

namespace slpn {

StateCapError::StateCapError(std::size_t states,
                             std::vector<std::string> witness,
                             bool unboundedness_suspected)
    : Error("state cap exceeded after " + std::to_string(states) +
            " states" +
            (unboundedness_suspected ? " (net is likely unbounded)" : "")),
      states_(states),
      witness_(std::move(witness)),
      suspected_(unboundedness_suspected) {}

}  // namespace slpn

namespace slpn::text {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

std::vector<Token> tokenize(std::string_view line, std::size_t line_number) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (is_space(line[i])) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    Token token;
    if (line[i] == '"') {
      token.quoted = true;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char c = line[i++];
        if (c == '\\' && i < line.size() && (line[i] == '"' || line[i] == '\\')) {
          token.value.push_back(line[i++]);
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          token.value.push_back(c);
        }
      }
      if (!closed) throw ParseError(line_number, "unterminated quoted string");
    } else {
      while (i < line.size() && !is_space(line[i]) && line[i] != '#') {
        token.value.push_back(line[i++]);
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string_view> lines(std::string_view input) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= input.size()) {
    std::size_t end = input.find('\n', start);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (end == input.size()) break;
    start = end + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (is_space(s.front()) || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (is_space(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_quoted(std::string_view s, char sep,
                                      std::size_t line_number) {
  std::vector<std::string> parts;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_quotes) {
      if (c == '\\' && i + 1 < s.size() && (s[i + 1] == '"' || s[i + 1] == '\\')) {
        current.push_back(s[++i]);
      } else if (c == '"') {
        in_quotes = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == sep) {
      parts.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(line_number, "unterminated quoted string");
  parts.push_back(std::move(current));
  return parts;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::optional<std::uint64_t> parse_unsigned(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

namespace {

std::optional<double> parse_decimal_or_fraction(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = parse_unsigned(s.substr(0, slash));
    auto den = parse_unsigned(s.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return static_cast<double>(*num) / static_cast<double>(*den);
  }
  if (s.front() == '+') return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

std::optional<double> parse_positive_weight(std::string_view s) {
  auto value = parse_decimal_or_fraction(s);
  if (!value || !(*value > 0.0)) return std::nullopt;
  return value;
}

std::optional<double> parse_probability(std::string_view s) {
  auto value = parse_decimal_or_fraction(s);
  if (!value || *value < 0.0 || *value > 1.0) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

std::string format_fixed(double value, int digits) {
  char buffer[128];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string quote_if_needed(std::string_view s) {
  bool plain = !s.empty();
  for (char c : s) {
    if (is_space(c) || c == '"' || c == '#' || c == ',' || c == '\\' ||
        c == ';' || c == '(' || c == ')' || c == ':') {
      plain = false;
      break;
    }
  }
  if (plain) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace slpn::text
