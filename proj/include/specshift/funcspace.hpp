#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace specshift {

using Complex = std::complex<double>;

enum class FunctionFamily { Polynomial, Exponential, Gaussian, Rational, Combination };

// Class-membership tags; bookkeeping only, never verified analytically.
enum FunctionClassTag : unsigned {
  kClassWp = 1u << 0,  // derivatives are Fourier transforms of finite measures
  kClassR = 1u << 1,   // rational with nonreal poles
  kClassRb = 1u << 2,  // bounded rational
  kClassCc = 1u << 3,  // compactly supported smooth
};

/// A scalar test function with closed-form derivatives of every order.
///
/// Families: polynomials sum c_j lambda^j, exponentials e^{i s lambda}
/// (s may be complex; only real s carries the Wp tag), gaussians
/// e^{-((lambda-c)/w)^2}, rationals sum r_j/(lambda-q_j) with Im q_j != 0,
/// and finite linear combinations. eval_derivative is exact up to round-off;
/// derivative() returns an order-shifted view of the same function, so
/// f.derivative().eval_derivative(t, k) == f.eval_derivative(t, k+1).
///
/// Values are immutable after construction and safe for concurrent reads.
class SmoothFunction {
 public:
  static SmoothFunction polynomial(std::vector<Complex> coefficients);
  static SmoothFunction exponential(Complex frequency);
  static SmoothFunction gaussian(double center, double width);
  static SmoothFunction rational(std::vector<std::pair<Complex, Complex>> pole_residues);
  static SmoothFunction combination(std::vector<std::pair<Complex, SmoothFunction>> terms);

  Complex operator()(double t) const { return eval_derivative(t, 0); }
  Complex eval_derivative(double t, int order) const;

  SmoothFunction derivative(int shift = 1) const;

  /// Largest derivative order still available (built-ins are unlimited).
  int max_order() const;
  /// Caps the declared derivative order; eval beyond the cap throws.
  SmoothFunction with_max_order(int cap) const;

  FunctionFamily family() const;
  unsigned class_tags() const;

  /// Canonical spec string in the CLI mini-language.
  const std::string& spec() const;

 private:
  struct Impl;
  SmoothFunction(std::shared_ptr<const Impl> impl, int shift);
  std::shared_ptr<const Impl> impl_;
  int order_shift_ = 0;
};

/// Parses the CLI mini-language:
///   poly:c0,c1,...   exp:s   gauss:center,width   rat:re+imi (pole, residue 1)
///   sum:(spec;spec;...)   with optional complex scalar prefixes  a*spec
/// Complex literals look like 1, -2.5, i, -i, 2i, 1+2i, 1.5-0.5i.
SmoothFunction parse_function_spec(std::string_view spec);

/// Formats a complex number as a mini-language literal.
std::string format_complex(Complex z);

}  // namespace specshift
