#include "specshift/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specshift/errors.hpp"
#include "specshift/quadrature.hpp"

namespace specshift {

KnotMultiset::KnotMultiset(std::vector<double> knots, double cluster_tolerance)
    : knots_(std::move(knots)) {
  if (knots_.empty()) throw std::invalid_argument("knot list must be nonempty");
  for (double k : knots_)
    if (!std::isfinite(k)) throw std::invalid_argument("knots must be finite");
  std::sort(knots_.begin(), knots_.end());
  const double scale = std::max(std::abs(knots_.front()), std::abs(knots_.back()));
  tolerance_ = cluster_tolerance >= 0.0 ? cluster_tolerance : 1e-8 * (1.0 + scale);

  // Cluster by consecutive gaps, then snap each cluster to its mean. A
  // cluster of bitwise-equal knots keeps its value so exact inputs stay
  // exact.
  size_t begin = 0;
  for (size_t i = 1; i <= knots_.size(); ++i) {
    if (i == knots_.size() || knots_[i] - knots_[i - 1] > tolerance_) {
      double mean = knots_[begin];
      if (knots_[i - 1] != knots_[begin]) {
        mean = 0.0;
        for (size_t j = begin; j < i; ++j) mean += knots_[j];
        mean /= double(i - begin);
      }
      for (size_t j = begin; j < i; ++j) knots_[j] = mean;
      distinct_.push_back(mean);
      multiplicities_.push_back(int(i - begin));
      begin = i;
    }
  }
}

int KnotMultiset::max_multiplicity() const {
  return *std::max_element(multiplicities_.begin(), multiplicities_.end());
}

Complex divided_difference(const DerivativeOracle& f, const KnotMultiset& km) {
  const auto z = km.knots();
  const int n = int(z.size());
  std::vector<Complex> table(n);
  for (int i = 0; i < n; ++i) table[i] = f(z[i], 0);
  double jfac = 1.0;
  for (int j = 1; j < n; ++j) {
    jfac *= j;
    // In-place column update, descending so table[i-1] still holds column j-1.
    for (int i = n - 1; i >= j; --i) {
      if (z[i] != z[i - j]) {
        table[i] = (table[i] - table[i - 1]) / (z[i] - z[i - j]);
      } else {
        // Equal knots are adjacent after clustering, so z[i-j..i] all coincide.
        table[i] = f(z[i], j) / jfac;
      }
    }
  }
  return table[n - 1];
}

Complex divided_difference(const SmoothFunction& f, const KnotMultiset& km) {
  if (km.max_multiplicity() - 1 > f.max_order())
    throw std::invalid_argument("function lacks the derivatives required by the knot multiplicities");
  return divided_difference(
      [&f](double t, int order) { return f.eval_derivative(t, order); }, km);
}

Complex repeated_knot_formula(const SmoothFunction& f, std::span<const double> base_knots,
                              int repeat_index) {
  const int p = int(base_knots.size());
  if (p < 1) throw std::invalid_argument("base knot list must be nonempty");
  if (repeat_index < 0 || repeat_index >= p) throw std::invalid_argument("repeat index out of range");
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (base_knots[a] == base_knots[b])
        throw std::invalid_argument("base knots must be pairwise distinct");

  const double li = base_knots[repeat_index];
  double prod_i = 1.0;
  for (int k = 0; k < p; ++k)
    if (k != repeat_index) prod_i *= li - base_knots[k];
  Complex acc = f.eval_derivative(li, 1) / prod_i;

  for (int j = 0; j < p; ++j) {
    if (j == repeat_index) continue;
    const double lj = base_knots[j];
    double prod_j_rest = 1.0, prod_i_rest = 1.0;
    for (int k = 0; k < p; ++k) {
      if (k == repeat_index || k == j) continue;
      prod_j_rest *= lj - base_knots[k];
      prod_i_rest *= li - base_knots[k];
    }
    acc += (f(lj) / prod_j_rest - f(li) / prod_i_rest) / ((li - lj) * (li - lj));
  }
  return acc;
}

Complex exponential_simplex_dd(double s, const KnotMultiset& km) {
  const int p = km.order();
  const auto lambda = km.knots();
  if (p == 0) return std::exp(Complex(0, s * lambda[0]));
  if (p > 3) throw EnvelopeError("simplex quadrature supports order <= 3");
  if (s == 0.0) throw std::invalid_argument("frequency must be nonzero for positive order");

  // Substituting s_j = s * u_1 ... u_j maps the ordered region
  // |s_p| <= ... <= |s_1| <= |s| (all signs equal to sign s) onto the unit
  // cube with volume element |s|^p u_1^{p-1} ... u_{p-1}; the i^p sign^p |s|^p
  // prefactor collapses to (i s)^p.
  const QuadratureRule& rule = gauss_legendre(32);
  std::vector<double> u(p);
  Complex sum = 0.0;
  std::vector<int> idx(p, 0);
  const int nn = int(rule.nodes.size());
  while (true) {
    double weight = 1.0, uprod = 1.0;
    for (int d = 0; d < p; ++d) {
      u[d] = 0.5 * (rule.nodes[idx[d]] + 1.0);
      weight *= 0.5 * rule.weights[idx[d]];
      for (int e = 0; e < p - 1 - d; ++e) uprod *= u[d];
    }
    // phase: (s - s_1) l_1 + (s_1 - s_2) l_2 + ... + s_p l_{p+1}
    double phase = 0.0, sj = s;
    for (int d = 0; d < p; ++d) {
      const double snext = sj * u[d];
      phase += (sj - snext) * lambda[d];
      sj = snext;
    }
    phase += sj * lambda[p];
    sum += weight * uprod * std::exp(Complex(0, phase));

    int d = 0;
    while (d < p && ++idx[d] == nn) idx[d++] = 0;
    if (d == p) break;
  }
  Complex prefactor = 1.0;
  for (int d = 0; d < p; ++d) prefactor *= Complex(0, s);
  return prefactor * sum;
}

}  // namespace specshift
