#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace causat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model (SCM, BN, DAG, joint table) or an operation on one is malformed.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Formula or term text could not be parsed. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        detail_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& detail() const noexcept { return detail_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

/// Evaluation was asked for something outside its contract.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A syntactic expansion would produce more summands than allowed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("expansion needs at least " + std::to_string(required) +
              " summands, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// A solver or transform configuration is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace causat
