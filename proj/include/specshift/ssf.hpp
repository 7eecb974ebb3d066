#pragma once

#include "specshift/moi.hpp"
#include "specshift/spectral.hpp"

namespace specshift {

enum class SsfVariant { Nup1, Nup2 };

/// Spectral shift density of order p together with its support data.
/// The density vanishes outside [hull_min, hull_max] (the convex hull of
/// the spectra of H0 and H0+V) and integrates to Tr(V^p)/p!.
struct SsfResult {
  int order = 1;
  SsfVariant variant = SsfVariant::Nup1;
  PiecewisePolynomial density;
  double hull_min = 0.0, hull_max = 0.0;
  Complex mass;  // exact integral of the density over its hull
};

/// Taylor remainder f(H0+V) - sum_{j<p} (1/j!) d^j f(H0+xV)|_0.
Matrix taylor_remainder(const SmoothFunction& f, const HermitianOperator& H0,
                        const HermitianOperator& V, int p, double cluster_tol = -1.0);

/// Krein's spectral shift function xi = N_{H0} - N_{H0+V}; the sign makes
/// Tr[R_1(f)] = integral of f' xi hold as written.
PiecewisePolynomial krein_xi(const HermitianOperator& H0, const HermitianOperator& V,
                             double cluster_tol = -1.0);

/// Higher-order spectral shift density: eta_1 = xi; for p >= 2,
///   eta_p(t) = Tr(V^{p-1})/(p-1)! - cumulative(eta_{p-1})(t) - K(t)/(p-1)!
/// where K integrates the antiderivative spline against m^{(1)}_{p-1}
/// (variant Nup1) or the spline of one order less against m_{p-1} (Nup2).
/// All terms are assembled as exact piecewise polynomials.
SsfResult ssf_density(const HermitianOperator& H0, const HermitianOperator& V, int p,
                      SsfVariant variant, double cluster_tol = -1.0);

struct TraceFormulaCheck {
  Complex trace_side;     // Tr[R_p(f)]
  Complex integral_side;  // integral of f^(p) eta_p
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / (1 + |trace_side|)
};

/// Evaluates both sides of the order-p trace formula for one test function.
TraceFormulaCheck trace_formula_check(const HermitianOperator& H0, const HermitianOperator& V,
                                      int p, const SmoothFunction& f, SsfVariant variant,
                                      double cluster_tol = -1.0);

}  // namespace specshift
