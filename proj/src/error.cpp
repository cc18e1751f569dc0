#include "exactpa/error.hpp"

namespace exactpa {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvariantViolation: return "invariant violation";
    case ErrorKind::EmptyPool: return "empty pool";
    case ErrorKind::Divisibility: return "divisibility";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InitDivisibility: return "initial graph divisibility";
    case ErrorKind::InitInfeasible: return "initial graph infeasible";
    case ErrorKind::RejectionBudget: return "rejection budget exhausted";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "configuration";
  }
  return "unknown";
}

}  // namespace exactpa
