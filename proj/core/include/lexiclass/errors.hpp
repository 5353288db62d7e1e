#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexiclass {

/// Base class for all domain-level failures raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (bad thresholds, missing classes, unusable spec).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Malformed record in an input stream. Carries the 1-based record ordinal.
class ParseError : public Error {
 public:
  ParseError(std::size_t ordinal, const std::string& reason)
      : Error("record " + std::to_string(ordinal) + ": " + reason),
        ordinal_(ordinal),
        reason_(reason) {}

  std::size_t ordinal() const noexcept { return ordinal_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t ordinal_;
  std::string reason_;
};

}  // namespace lexiclass
