#pragma once

#include <stdexcept>

namespace specshift {

/// Malformed input text: function specs, knot lists, matrix or density files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix fails the Hermitianity tolerance on load or construction.
class HermiticityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tuple count would exceed the desk-scale envelope (r^p <= 1e7).
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical evaluation failed (eigensolver non-convergence and friends).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specshift
