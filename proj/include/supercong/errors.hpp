#pragma once

#include <stdexcept>
#include <string>

namespace supercong {

/// Bad arguments: non-prime modulus, non-squarefree d, out-of-range index.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem's hypothesis is not met by an otherwise valid instance
/// (e.g. the exact-division corollary on an instance with v_p(u) != 1).
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

/// The request is meaningful but outside what this library evaluates
/// (general Teichmueller twists, non-split characters).
class ScopeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An internal mathematical invariant failed. Always a bug or a
/// counterexample worth reporting loudly.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace supercong
