#include "specshift/splines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specshift/quadrature.hpp"

namespace specshift {

namespace {

constexpr double kTailTolerance = 1e-10;
constexpr double kMaxPanelWidth = 0.5;

double falling(int j, int k) {
  double r = 1.0;
  for (int m = 0; m < k; ++m) r *= double(j - m);
  return r;
}

double factorial(int k) { return falling(k, k); }

// Evaluates a piece in its local variable.
Complex horner(const std::vector<Complex>& coeffs, double x) {
  Complex acc = 0.0;
  for (size_t j = coeffs.size(); j-- > 0;) acc = acc * x + coeffs[j];
  return acc;
}

// Rewrites a polynomial in (t - b) as one in (t - c) with c = b + delta.
std::vector<Complex> shift_local_variable(const std::vector<Complex>& coeffs, double delta) {
  const int d = int(coeffs.size()) - 1;
  std::vector<Complex> out(coeffs.size(), Complex(0.0));
  for (int j = 0; j <= d; ++j) {
    // coeffs[j] * ((t-c) + delta)^j
    double binom = 1.0, dpow = 1.0;
    for (int m = j; m >= 0; --m) {
      out[m] += coeffs[j] * binom * dpow;
      binom *= double(m) / double(j - m + 1);
      dpow *= delta;
    }
  }
  return out;
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial() = default;

PiecewisePolynomial PiecewisePolynomial::constant(Complex value) {
  PiecewisePolynomial pp;
  pp.left_ = pp.right_ = value;
  return pp;
}

PiecewisePolynomial PiecewisePolynomial::step(double at, Complex left, Complex right) {
  PiecewisePolynomial pp;
  pp.breakpoints_ = {at};
  pp.left_ = left;
  pp.right_ = right;
  return pp;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<Complex>> pieces,
                                         Complex left_value, Complex right_value)
    : breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      left_(left_value),
      right_(right_value) {
  if (breakpoints_.empty()) {
    if (!pieces_.empty()) throw std::invalid_argument("pieces without breakpoints");
    if (left_ != right_) throw std::invalid_argument("breakpoint-free function must be constant");
    return;
  }
  if (pieces_.size() + 1 != breakpoints_.size())
    throw std::invalid_argument("piece count must equal breakpoint count minus 1");
  for (size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i - 1] < breakpoints_[i]))
      throw std::invalid_argument("breakpoints must be strictly increasing");
}

Complex PiecewisePolynomial::operator()(double t) const {
  if (breakpoints_.empty()) return left_;
  if (t < breakpoints_.front()) return left_;
  if (t >= breakpoints_.back()) return right_;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const size_t idx = size_t(it - breakpoints_.begin()) - 1;
  return horner(pieces_[idx], t - breakpoints_[idx]);
}

int PiecewisePolynomial::degree() const {
  int d = 0;
  for (const auto& piece : pieces_) d = std::max(d, int(piece.size()) - 1);
  return d;
}

double truncated_power(double x, int k) {
  if (x < 0.0) return 0.0;
  if (k == 0) return 1.0;
  double r = 1.0;
  for (int m = 0; m < k; ++m) r *= x;
  return r;
}

namespace {

// t -> dd over `km` of (lambda - t)_+^k as an exact piecewise polynomial.
// On each interval between consecutive distinct knots the map is a
// polynomial of degree <= k, recovered by sampling the confluent divided
// difference at k+1 Chebyshev points and interpolating.
PiecewisePolynomial dd_truncated_power_pp(const KnotMultiset& km, int k) {
  const int p = km.order();
  const auto dist = km.distinct();
  const Complex left_tail = (k == p) ? 1.0 : 0.0;  // (lambda-t)^k is a degree-k polynomial there
  if (dist.size() == 1) return PiecewisePolynomial::step(dist[0], left_tail, 0.0);

  std::vector<double> breakpoints(dist.begin(), dist.end());
  std::vector<std::vector<Complex>> pieces;
  pieces.reserve(dist.size() - 1);
  for (size_t m = 0; m + 1 < dist.size(); ++m) {
    const double u = dist[m], v = dist[m + 1];
    const double mid = 0.5 * (u + v), half = 0.5 * (v - u);
    const int npts = k + 1;
    std::vector<double> ts(npts);
    std::vector<Complex> ys(npts);
    for (int j = 0; j < npts; ++j) {
      ts[j] = mid + half * std::cos(M_PI * (2.0 * j + 1.0) / (2.0 * npts));
      const double t = ts[j];
      ys[j] = divided_difference(
          [t, k](double lambda, int order) -> Complex {
            if (order > k) return 0.0;
            return falling(k, order) * truncated_power(lambda - t, k - order);
          },
          km);
    }
    // Newton form of the interpolant, then conversion to the local monomial
    // basis in (t - u).
    std::vector<Complex> newton(ys);
    for (int j = 1; j < npts; ++j)
      for (int i = npts - 1; i >= j; --i)
        newton[i] = (newton[i] - newton[i - 1]) / (ts[i] - ts[i - j]);
    std::vector<Complex> coeffs(npts, Complex(0.0));
    // poly = sum_j newton[j] * prod_{m<j} (t - ts[m]); accumulate in (t - u).
    std::vector<Complex> basis{Complex(1.0)};  // running product in (t - u)
    coeffs[0] = newton[0];
    for (int j = 1; j < npts; ++j) {
      // multiply basis by ((t-u) - (ts[j-1]-u))
      std::vector<Complex> next(basis.size() + 1, Complex(0.0));
      const double root = ts[j - 1] - u;
      for (size_t m = 0; m < basis.size(); ++m) {
        next[m + 1] += basis[m];
        next[m] -= basis[m] * root;
      }
      basis = std::move(next);
      for (size_t m = 0; m < basis.size(); ++m) coeffs[m] += newton[j] * basis[m];
    }
    pieces.push_back(std::move(coeffs));
  }
  return PiecewisePolynomial(std::move(breakpoints), std::move(pieces), left_tail, 0.0);
}

}  // namespace

PiecewisePolynomial basic_spline(const KnotMultiset& km) {
  if (km.order() < 1) throw std::invalid_argument("basic spline needs order >= 1");
  if (km.all_coincident())
    throw std::invalid_argument("basic spline needs at least two distinct knots");
  return dd_truncated_power_pp(km, km.order() - 1);
}

PiecewisePolynomial spline_antiderivative(const KnotMultiset& km) {
  return dd_truncated_power_pp(km, km.order());
}

PiecewisePolynomial pp_combine(std::span<const Complex> scalars,
                               std::span<const PiecewisePolynomial* const> terms) {
  if (scalars.size() != terms.size())
    throw std::invalid_argument("scalar and term counts must match");

  std::vector<double> merged;
  for (const auto* term : terms)
    merged.insert(merged.end(), term->breakpoints().begin(), term->breakpoints().end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  Complex left = 0.0, right = 0.0;
  for (size_t i = 0; i < terms.size(); ++i) {
    left += scalars[i] * terms[i]->left_value();
    right += scalars[i] * terms[i]->right_value();
  }
  if (merged.empty()) return PiecewisePolynomial::constant(left);

  std::vector<std::vector<Complex>> pieces(merged.size() - 1);
  for (size_t m = 0; m + 1 < merged.size(); ++m) {
    const double u = merged[m];
    std::vector<Complex> acc{Complex(0.0)};
    for (size_t i = 0; i < terms.size(); ++i) {
      const auto& term = *terms[i];
      const auto bp = term.breakpoints();
      std::vector<Complex> local;
      if (bp.empty() || u < bp.front()) {
        local = {term.left_value()};
      } else if (u >= bp.back()) {
        local = {term.right_value()};
      } else {
        const auto it = std::upper_bound(bp.begin(), bp.end(), u);
        const size_t idx = size_t(it - bp.begin()) - 1;
        local = shift_local_variable(term.pieces()[idx], u - bp[idx]);
      }
      if (local.size() > acc.size()) acc.resize(local.size(), Complex(0.0));
      for (size_t j = 0; j < local.size(); ++j) acc[j] += scalars[i] * local[j];
    }
    while (acc.size() > 1 && acc.back() == Complex(0.0)) acc.pop_back();
    pieces[m] = std::move(acc);
  }
  return PiecewisePolynomial(std::move(merged), std::move(pieces), left, right);
}

PiecewisePolynomial pp_combine(const std::vector<Complex>& scalars,
                               const std::vector<PiecewisePolynomial>& terms) {
  std::vector<const PiecewisePolynomial*> ptrs;
  ptrs.reserve(terms.size());
  for (const auto& t : terms) ptrs.push_back(&t);
  return pp_combine(std::span<const Complex>(scalars),
                    std::span<const PiecewisePolynomial* const>(ptrs));
}

PiecewisePolynomial pp_cumulative(const PiecewisePolynomial& P) {
  if (std::abs(P.left_value()) > kTailTolerance)
    throw std::invalid_argument("cumulative requires a vanishing left tail");
  if (std::abs(P.right_value()) > kTailTolerance)
    throw std::invalid_argument("cumulative requires a vanishing right tail");
  const auto bp = P.breakpoints();
  if (bp.empty()) return PiecewisePolynomial::constant(0.0);

  std::vector<double> breakpoints(bp.begin(), bp.end());
  std::vector<std::vector<Complex>> pieces(P.pieces().size());
  Complex acc = 0.0;
  for (size_t m = 0; m < P.pieces().size(); ++m) {
    const auto& piece = P.pieces()[m];
    std::vector<Complex> anti(piece.size() + 1, Complex(0.0));
    anti[0] = acc;
    for (size_t j = 0; j < piece.size(); ++j) anti[j + 1] = piece[j] / double(j + 1);
    acc = horner(anti, breakpoints[m + 1] - breakpoints[m]);
    pieces[m] = std::move(anti);
  }
  return PiecewisePolynomial(std::move(breakpoints), std::move(pieces), 0.0, acc);
}

Complex pp_integral(const PiecewisePolynomial& P) {
  const auto bp = P.breakpoints();
  Complex acc = 0.0;
  for (size_t m = 0; m < P.pieces().size(); ++m) {
    const double w = bp[m + 1] - bp[m];
    double wpow = w;
    for (size_t j = 0; j < P.pieces()[m].size(); ++j) {
      acc += P.pieces()[m][j] * wpow / double(j + 1);
      wpow *= w;
    }
  }
  return acc;
}

Complex pp_integrate_against(const PiecewisePolynomial& P, const SmoothFunction& f, int k,
                             double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("integration window must satisfy a <= b");
  const auto bp = P.breakpoints();
  std::vector<double> cuts{a};
  for (double t : bp)
    if (t > a && t < b) cuts.push_back(t);
  cuts.push_back(b);

  const QuadratureRule& rule = gauss_legendre(24);
  Complex acc = 0.0;
  for (size_t m = 0; m + 1 < cuts.size(); ++m) {
    const double lo = cuts[m], hi = cuts[m + 1];
    const int panels = std::max(1, int(std::ceil((hi - lo) / kMaxPanelWidth)));
    for (int q = 0; q < panels; ++q) {
      const double pa = lo + (hi - lo) * double(q) / panels;
      const double pb = lo + (hi - lo) * double(q + 1) / panels;
      acc += integrate_panel(
          [&](double t) { return f.eval_derivative(t, k) * P(t); }, pa, pb, rule);
    }
  }
  return acc;
}

Complex pp_integrate_against(const PiecewisePolynomial& P, const SmoothFunction& f, int k) {
  const auto bp = P.breakpoints();
  if (bp.empty()) return 0.0;
  return pp_integrate_against(P, f, k, bp.front(), bp.back());
}

Complex dd_via_peano(const SmoothFunction& f, const KnotMultiset& km) {
  const int p = km.order();
  if (p == 0) return f(km.min());
  if (km.all_coincident()) return f.eval_derivative(km.min(), p) / factorial(p);
  const PiecewisePolynomial kernel = basic_spline(km);
  return pp_integrate_against(kernel, f, p, km.min(), km.max()) / factorial(p - 1);
}

Complex dd_via_antiderivative(const SmoothFunction& f, const KnotMultiset& km) {
  const int p = km.order();
  const double a = km.min(), b = km.max();
  const Complex boundary = f.eval_derivative(a, p) / factorial(p);
  if (a == b) return boundary;
  const PiecewisePolynomial kernel = spline_antiderivative(km);
  return boundary + pp_integrate_against(kernel, f, p + 1, a, b) / factorial(p);
}

}  // namespace specshift
