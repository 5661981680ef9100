#pragma once

#include <stdexcept>
#include <string>

namespace soilrl {

/// Invalid distribution or model parameter.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid scenario / agent configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line and column when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) +
                                          ", column " + std::to_string(column) + ")"
                                    : what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Operation called in the wrong lifecycle state (e.g. step after done).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite loss or parameter during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace soilrl
