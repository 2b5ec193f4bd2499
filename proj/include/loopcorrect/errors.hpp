#pragma once

#include <stdexcept>
#include <string>

namespace loopcorrect {

/// Invalid argument: bad node/edge id, malformed input.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the domain where an operation is defined
/// (self-loop contraction, disconnected graph, zero belief, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Enumeration or brute-force cap exceeded.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Non-finite values during message passing.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requires a converged fixed point.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Polynomial division left a nonzero remainder.
class DivisibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural identity that must hold exactly was observed to fail.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model generator could not realize the requested topology.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loopcorrect
