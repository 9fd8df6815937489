#pragma once

#include <stdexcept>
#include <string>

namespace shgcn {

// Precondition violated by the caller (bad arguments, inconsistent inputs).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operand shapes do not line up.
class ShapeError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Argument outside the mathematical domain of an operation, e.g. log0 of a
// point that sits on the ball boundary.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input is valid but larger than a configured safety cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shgcn
