#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pozlog {

// Every library error carries the name of the module that raised it so the
// CLI can report `error[<origin>]: ...`.
class Error : public std::runtime_error {
 public:
  Error(std::string origin, const std::string& message)
      : std::runtime_error(message), origin_(std::move(origin)) {}

  const std::string& origin() const noexcept { return origin_; }

 private:
  std::string origin_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string origin, const std::string& message, std::size_t line, std::size_t column)
      : Error(std::move(origin), message + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A formula used outside the fragment the caller selected.
class ModeViolation : public Error {
 public:
  using Error::Error;
};

// Exceeded budgets are errors, never a silent `false`.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace pozlog
