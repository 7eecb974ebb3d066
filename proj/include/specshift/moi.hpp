#pragma once

#include "specshift/multimeasure.hpp"
#include "specshift/spectral.hpp"

namespace specshift {

/// d^p/dx^p f(H0 + xV) at x = 0, as the eigen-atom sum
/// p! sum over (p+1)-tuples of dd(f) * P_{i1} V P_{i2} ... V P_{i_{p+1}}.
/// p = 0 returns f(H0).
Matrix operator_derivative(const SmoothFunction& f, const SpectralDecomposition& D,
                           const HermitianOperator& V, int p);

enum class TraceMethod { M1Form, MForm, OperatorTrace, FiniteDifference };

/// Trace of the p-th operator derivative by one of four routes:
/// M1Form integrates p! dd^{(p)}(f) against m^{(1)}_p, MForm integrates
/// (p-1)! dd^{(p-1)}(f') against m_p, OperatorTrace traces the operator sum,
/// FiniteDifference differentiates x -> Tr f(H0 + xV) numerically (5-point
/// stencils with one Richardson refinement; supports p <= 4).
Complex trace_derivative(const SmoothFunction& f, const SpectralDecomposition& D,
                         const HermitianOperator& V, int p, TraceMethod method);

struct KernelTraceIdentity {
  Complex lhs;     // Tr d^p f - Tr(V^p) f^(p)(a)
  Complex rhs_m1;  // spline kernel integrated against m^{(1)}_p
  Complex rhs_m;   // spline kernel of one order less against m_p
};

/// Evaluates both sides of the spline-kernel trace identities on a segment
/// [a, b] containing the spectra of H0 and H0 + V.
KernelTraceIdentity kernel_trace_identity(const SmoothFunction& f,
                                          const SpectralDecomposition& D,
                                          const HermitianOperator& V, int p, double a,
                                          double b);

/// Tr(V^p) by direct matrix powers.
Complex trace_power(const HermitianOperator& V, int p);

/// t -> integral of dd((lambda - t)_+^{arity-1}) over the measure's tuples,
/// assembled as one exact piecewise polynomial. This is the inner kernel of
/// the spline trace identities and of the density recursion; its left tail
/// equals the measure's total mass and its right tail vanishes.
PiecewisePolynomial measure_spline_kernel(const MultiSpectralMeasure& mu);

}  // namespace specshift
