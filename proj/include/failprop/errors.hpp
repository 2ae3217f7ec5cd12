#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace failprop {

/// Malformed or invariant-violating network input. `line` is 0 when the
/// problem is not tied to a source line.
class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A parameter outside its allowed range. `field` names the offending key.
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace failprop
