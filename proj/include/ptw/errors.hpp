#pragma once

#include <stdexcept>
#include <string>

namespace ptw {

/// Argument outside the mathematical domain of a formula (kappa, w, speed).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Grid size that is odd, too small, or otherwise unusable.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A period or speed that no member of the wave family can realize.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The closed-form index is nonnegative, so no stabilizing speed exists.
class NoThresholdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigensolver or linear solve that did not deliver a usable answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form expression hit a vanishing denominator.
class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptw
