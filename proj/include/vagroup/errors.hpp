#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vagroup {

// Rejected input: a malformed element, a violated precondition, or a rule of
// the group that the arguments break.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An element failed va_validate / pl validation while being constructed.
class ValidationError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Syntax error in the element DSL; carries a 1-based source position.
class ParseError : public DomainError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : DomainError(std::to_string(line) + ":" + std::to_string(column) + ": " +
                    what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A configured budget (piece count, ball size) was exceeded. Never a wrong
// answer, always a clean stop.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vagroup
