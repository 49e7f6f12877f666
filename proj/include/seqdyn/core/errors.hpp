#pragma once

#include <stdexcept>
#include <string>

namespace seqdyn {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto its exit codes (validation 1, budget/aliasing 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::string field, int line, const std::string& what)
      : ValidationError(describe(field, line, what)),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string describe(const std::string& field, int line,
                              const std::string& what) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + what;
  }

  std::string field_;
  int line_ = 0;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

// Raised when a rational stand-in for an irrational rotation would be
// iterated far enough to expose its period.
class AliasingError : public BudgetError {
 public:
  using BudgetError::BudgetError;
};

}  // namespace seqdyn
