#pragma once

#include <stdexcept>
#include <string>

namespace sheafcoh {

/// A documented precondition of an operation does not hold for its inputs
/// (ill-defined homomorphism, non-cocycle, non-commuting square, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or invalid user input (instance files, CLI arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sheafcoh
