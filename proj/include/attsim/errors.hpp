#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace attsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error { using Error::Error; };
class SelfLoopError : public Error { using Error::Error; };
class MissingNodeError : public Error { using Error::Error; };
class LayeringError : public Error { using Error::Error; };
class DegenerateDistributionError : public Error { using Error::Error; };
class ParameterError : public Error { using Error::Error; };
class StateError : public Error { using Error::Error; };
class AlignmentError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };
class ConfigSyntaxError : public Error { using Error::Error; };

// Carries the offending key so callers can report it.
class ConfigValidationError : public Error {
 public:
  ConfigValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Raised by network import; line numbers are 1-based and count the header.
class ImportError : public Error {
 public:
  ImportError(std::string file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace attsim
