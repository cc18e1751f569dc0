#pragma once

#include <stdexcept>
#include <string>

namespace exactpa {

enum class ErrorKind {
  InvariantViolation,
  EmptyPool,
  Divisibility,
  Infeasible,
  Arity,
  Domain,
  InitDivisibility,
  InitInfeasible,
  RejectionBudget,
  Io,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace exactpa
