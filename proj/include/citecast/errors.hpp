#pragma once

#include <stdexcept>
#include <string>

namespace citecast {

// Bad argument or precondition violation reported by a public operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A lookup by author or paper id that does not exist.
class UnknownEntityError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input; message carries "<file>:<line>: <reason>".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& reason)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
        file_(file),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Non-finite loss during training.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input outside an operation's documented domain (e.g. negative raw output).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Pearson r / R^2 on a zero-variance sample.
class UndefinedCorrelationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace citecast
