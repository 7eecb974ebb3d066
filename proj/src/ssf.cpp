#include "specshift/ssf.hpp"

#include <algorithm>

#include "specshift/errors.hpp"

namespace specshift {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int m = 2; m <= k; ++m) r *= m;
  return r;
}

}  // namespace

Matrix taylor_remainder(const SmoothFunction& f, const HermitianOperator& H0,
                        const HermitianOperator& V, int p, double cluster_tol) {
  if (p < 1) throw std::invalid_argument("remainder order must be >= 1");
  if (H0.dim() != V.dim()) throw std::invalid_argument("dimension mismatch between H0 and V");
  const SpectralDecomposition d0 = decompose(H0, cluster_tol);
  const SpectralDecomposition dv = decompose(HermitianOperator(H0.matrix() + V.matrix()),
                                             cluster_tol);
  Matrix out = apply_function(f, dv);
  for (int j = 0; j < p; ++j) out -= operator_derivative(f, d0, V, j) / factorial(j);
  return out;
}

PiecewisePolynomial krein_xi(const HermitianOperator& H0, const HermitianOperator& V,
                             double cluster_tol) {
  const SpectralDecomposition d0 = decompose(H0, cluster_tol);
  const SpectralDecomposition dv = decompose(HermitianOperator(H0.matrix() + V.matrix()),
                                             cluster_tol);
  return pp_combine({Complex(1.0), Complex(-1.0)}, {counting_step(d0), counting_step(dv)});
}

SsfResult ssf_density(const HermitianOperator& H0, const HermitianOperator& V, int p,
                      SsfVariant variant, double cluster_tol) {
  if (p < 1) throw std::invalid_argument("density order must be >= 1");
  if (H0.dim() != V.dim()) throw std::invalid_argument("dimension mismatch between H0 and V");
  const SpectralDecomposition d0 = decompose(H0, cluster_tol);
  const SpectralDecomposition dv = decompose(HermitianOperator(H0.matrix() + V.matrix()),
                                             cluster_tol);

  SsfResult result;
  result.order = p;
  result.variant = variant;
  result.hull_min = std::min(d0.eigenvalues.front(), dv.eigenvalues.front());
  result.hull_max = std::max(d0.eigenvalues.back(), dv.eigenvalues.back());

  PiecewisePolynomial eta =
      pp_combine({Complex(1.0), Complex(-1.0)}, {counting_step(d0), counting_step(dv)});
  for (int q = 2; q <= p; ++q) {
    const MultiSpectralMeasure mu = variant == SsfVariant::Nup1 ? build_m1(d0, V, q - 1)
                                                                : build_m(d0, V, q - 1);
    const PiecewisePolynomial kernel = measure_spline_kernel(mu);
    const PiecewisePolynomial cumulative = pp_cumulative(eta);
    // The constant term Tr(V^{q-1})/(q-1)! reuses the kernel's own left tail
    // (the measure's total mass), so the assembled density cancels to an
    // exact zero left of the hull.
    const Complex inv_fac = 1.0 / factorial(q - 1);
    eta = pp_combine({inv_fac, -inv_fac, Complex(-1.0)},
                     {PiecewisePolynomial::constant(kernel.left_value()), kernel, cumulative});
  }
  result.mass = pp_integral(eta);
  result.density = std::move(eta);
  return result;
}

TraceFormulaCheck trace_formula_check(const HermitianOperator& H0, const HermitianOperator& V,
                                      int p, const SmoothFunction& f, SsfVariant variant,
                                      double cluster_tol) {
  TraceFormulaCheck check;
  check.trace_side = taylor_remainder(f, H0, V, p, cluster_tol).trace();
  const SsfResult ssf = ssf_density(H0, V, p, variant, cluster_tol);
  check.integral_side = pp_integrate_against(ssf.density, f, p);
  check.abs_err = std::abs(check.trace_side - check.integral_side);
  check.rel_err = check.abs_err / (1.0 + std::abs(check.trace_side));
  return check;
}

}  // namespace specshift
