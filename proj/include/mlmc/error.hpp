#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlmc {

/// Input file could not be parsed. Carries the 1-based line number.
class MalformedInput : public std::runtime_error {
 public:
  MalformedInput(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structurally valid input that does not describe a usable instance.
class InvalidInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request exceeds a solver's hard size limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver returned a result that breaks the solver contract.
class SolverContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad run configuration (unknown solver, inconsistent sizes, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlmc
