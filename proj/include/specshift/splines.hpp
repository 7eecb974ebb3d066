#pragma once

#include <span>
#include <vector>

#include "specshift/divdiff.hpp"
#include "specshift/funcspace.hpp"

namespace specshift {

/// Piecewise polynomial that is constant outside its breakpoint hull.
///
/// Pieces live on half-open intervals [b_k, b_{k+1}) in the local variable
/// t - b_k (lowest degree first); evaluation is right-continuous at
/// breakpoints. t < b_0 yields left_value, t >= b_K yields right_value.
/// A constant function is represented with no breakpoints and
/// left_value == right_value.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial();  // the zero function
  static PiecewisePolynomial constant(Complex value);
  /// Right-continuous step: `left` for t < at, `right` for t >= at.
  static PiecewisePolynomial step(double at, Complex left, Complex right);
  PiecewisePolynomial(std::vector<double> breakpoints,
                      std::vector<std::vector<Complex>> pieces, Complex left_value,
                      Complex right_value);

  Complex operator()(double t) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<Complex>>& pieces() const { return pieces_; }
  Complex left_value() const { return left_; }
  Complex right_value() const { return right_; }
  int degree() const;
  bool is_constant() const { return breakpoints_.empty(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<std::vector<Complex>> pieces_;
  Complex left_ = 0.0, right_ = 0.0;
};

/// x^k for x >= 0 and 0 for x < 0, with 0^0 = 1 (right-closed step).
double truncated_power(double x, int k);

/// The nonnegative Peano kernel of the divided difference: for order p > 1
/// the map t -> dd((lambda - t)_+^{p-1}) over the knots, for p = 1 the
/// normalized indicator of the knot interval. Integral is 1/p.
PiecewisePolynomial basic_spline(const KnotMultiset& knots);

/// t -> dd((lambda - t)_+^p): decreasing from 1 to 0 across the knot hull;
/// the all-coincident case is the step at the common knot.
PiecewisePolynomial spline_antiderivative(const KnotMultiset& knots);

/// Exact linear combination on the merged breakpoint set.
PiecewisePolynomial pp_combine(std::span<const Complex> scalars,
                               std::span<const PiecewisePolynomial* const> terms);
PiecewisePolynomial pp_combine(const std::vector<Complex>& scalars,
                               const std::vector<PiecewisePolynomial>& terms);

/// t -> integral of P over (-inf, t], by exact per-piece antidifferentiation.
/// Both tail values of P must vanish (|tail| <= 1e-10).
PiecewisePolynomial pp_cumulative(const PiecewisePolynomial& P);

/// Exact integral of P over its breakpoint hull (the whole line when the
/// tails vanish).
Complex pp_integral(const PiecewisePolynomial& P);

/// integral of f^(k)(t) P(t) dt over the breakpoint hull, by composite
/// Gauss-Legendre with 24 nodes per panel; when the tails vanish this equals
/// the integral over the whole line.
Complex pp_integrate_against(const PiecewisePolynomial& P, const SmoothFunction& f, int k);

/// Same integrand restricted to the window [a, b]; tail regions inside the
/// window contribute their constant values.
Complex pp_integrate_against(const PiecewisePolynomial& P, const SmoothFunction& f, int k,
                             double a, double b);

/// Divided difference through the Peano kernel integral (coincident branch:
/// f^(p)(lambda)/p!).
Complex dd_via_peano(const SmoothFunction& f, const KnotMultiset& knots);

/// Divided difference through the antiderivative-spline representation
/// f^(p)(a)/p! + (1/p!) integral of f^(p+1)(t) dd((lambda-t)_+^p) dt.
Complex dd_via_antiderivative(const SmoothFunction& f, const KnotMultiset& knots);

}  // namespace specshift
