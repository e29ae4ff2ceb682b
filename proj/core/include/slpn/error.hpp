#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace slpn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 means "whole input".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// State exploration hit the configured cap. Carries the firing sequence that
/// led to the last discovered state.
class StateCapError : public Error {
 public:
  StateCapError(std::size_t states, std::vector<std::string> witness,
                bool unboundedness_suspected);

  std::size_t states() const noexcept { return states_; }
  const std::vector<std::string>& witness() const noexcept { return witness_; }
  bool unboundedness_suspected() const noexcept { return suspected_; }

 private:
  std::size_t states_;
  std::vector<std::string> witness_;
  bool suspected_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

struct Diagnostic {
  enum class Severity { warning, error };

  Severity severity = Severity::warning;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline void warn(Diagnostics* sink, std::string message) {
  if (sink != nullptr) {
    sink->push_back({Diagnostic::Severity::warning, std::move(message)});
  }
}

}  // namespace slpn
