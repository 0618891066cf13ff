#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pred {

// Base for every error raised by the toolkit. Subclasses name the failure
// category so callers can react (e.g. the CLI maps them to exit statuses).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

class IntegrityError : public Error { using Error::Error; };
class ReferenceError : public Error { using Error::Error; };
class MissingContextError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };
class CoverageError : public Error { using Error::Error; };
class TokenizationError : public Error { using Error::Error; };
class DesignError : public Error { using Error::Error; };
class ConvergenceError : public Error { using Error::Error; };
class PlanError : public Error { using Error::Error; };
class ComparisonError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class UnsupportedDatasetError : public Error { using Error::Error; };
class OutputError : public Error { using Error::Error; };
class ProtocolError : public Error { using Error::Error; };

}  // namespace pred
