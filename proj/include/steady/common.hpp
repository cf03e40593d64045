#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace steady {

using token_id = std::int32_t;

// Passed to Session::step at t = 0, before any token has been emitted.
inline constexpr token_id kStartToken = -1;

// Bias value meaning "probability exactly zero after softmax".
inline constexpr double kMask = -std::numeric_limits<double>::infinity();

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ArgumentError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class SessionClosed : public std::logic_error {
 public:
  SessionClosed() : std::logic_error("guidance session already finished") {}
};

class FormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace steady
