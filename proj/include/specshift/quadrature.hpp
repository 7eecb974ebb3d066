#pragma once

#include <vector>

namespace specshift {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n points; exact for polynomials of degree 2n-1.
const QuadratureRule& gauss_legendre(int n);

/// Maps the rule onto [a, b]; sums w_j * f(x_j).
template <class F>
auto integrate_panel(const F& f, double a, double b, const QuadratureRule& rule)
    -> decltype(f(0.0)) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  decltype(f(0.0)) acc{};
  for (size_t j = 0; j < rule.nodes.size(); ++j)
    acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
  return half * acc;
}

}  // namespace specshift
