#include "specshift/moi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "specshift/errors.hpp"
#include "specshift/splines.hpp"

namespace specshift {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int m = 2; m <= k; ++m) r *= m;
  return r;
}

// Divided differences of f over eigenvalue tuples, memoized by the sorted
// index multiset (the difference is symmetric in its knots).
class DividedDifferenceCache {
 public:
  DividedDifferenceCache(const SmoothFunction& f, std::span<const double> atoms)
      : f_(f), atoms_(atoms) {}

  Complex at(std::span<const int> tuple) {
    key_.assign(tuple.begin(), tuple.end());
    std::sort(key_.begin(), key_.end());
    const auto it = cache_.find(key_);
    if (it != cache_.end()) return it->second;
    std::vector<double> knots(key_.size());
    for (size_t i = 0; i < key_.size(); ++i) knots[i] = atoms_[key_[i]];
    // Atoms are cluster representatives, already separated; no re-snapping.
    const Complex value = divided_difference(f_, KnotMultiset(std::move(knots), 0.0));
    cache_.emplace(key_, value);
    return value;
  }

 private:
  const SmoothFunction& f_;
  std::span<const double> atoms_;
  std::vector<int> key_;
  std::map<std::vector<int>, Complex> cache_;
};

constexpr double kTupleEnvelope = 1e7;

void check_envelope(int r, int arity) {
  double count = 1.0;
  for (int i = 0; i < arity; ++i) count *= r;
  if (count > kTupleEnvelope)
    throw EnvelopeError("tuple count exceeds the desk-scale envelope (1e7 atoms)");
}

Complex trace_of_matrix_function(const SmoothFunction& f, const Matrix& H) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) throw EvalError("eigensolver failed to converge");
  Complex acc = 0.0;
  for (int i = 0; i < H.rows(); ++i) acc += f(solver.eigenvalues()[i]);
  return acc;
}

// p-th derivative of g at 0 from 5-point central stencils; error O(h^4) for
// p <= 2 and O(h^2) for p in {3, 4}.
Complex stencil_derivative(const std::function<Complex(double)>& g, int p, double h) {
  const Complex g1 = g(h), gm1 = g(-h), g2 = g(2 * h), gm2 = g(-2 * h);
  switch (p) {
    case 1:
      return (-g2 + 8.0 * g1 - 8.0 * gm1 + gm2) / (12.0 * h);
    case 2:
      return (-g2 + 16.0 * g1 - 30.0 * g(0.0) + 16.0 * gm1 - gm2) / (12.0 * h * h);
    case 3:
      return (g2 - 2.0 * g1 + 2.0 * gm1 - gm2) / (2.0 * h * h * h);
    case 4:
      return (g2 - 4.0 * g1 + 6.0 * g(0.0) - 4.0 * gm1 + gm2) / (h * h * h * h);
    default:
      throw std::invalid_argument("finite-difference trace derivative supports p <= 4");
  }
}

}  // namespace

Complex trace_power(const HermitianOperator& V, int p) {
  Matrix acc = Matrix::Identity(V.dim(), V.dim());
  for (int m = 0; m < p; ++m) acc = acc * V.matrix();
  return acc.trace();
}

Matrix operator_derivative(const SmoothFunction& f, const SpectralDecomposition& D,
                           const HermitianOperator& V, int p) {
  if (p < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (V.dim() != D.dim) throw std::invalid_argument("dimension mismatch between V and H0");
  if (p == 0) return apply_function(f, D);
  const int r = D.cluster_count();
  check_envelope(r, p + 1);

  const Matrix vbasis = D.basis.adjoint() * V.matrix() * D.basis;
  DividedDifferenceCache dd(f, D.eigenvalues);
  Matrix result = Matrix::Zero(D.dim, D.dim);  // accumulated in the eigenbasis

  // DFS over (p+1)-tuples with running block products.
  std::vector<int> tuple(p + 1);
  std::vector<Matrix> prefix(p + 1);
  auto block = [&](int a, int b) {
    return vbasis.block(D.block_offsets[a], D.block_offsets[b], D.multiplicities[a],
                        D.multiplicities[b]);
  };
  const std::function<void(int)> walk = [&](int depth) {
    if (depth == p + 1) {
      const int i1 = tuple[0], last = tuple[p];
      result.block(D.block_offsets[i1], D.block_offsets[last], D.multiplicities[i1],
                   D.multiplicities[last]) += dd.at(tuple) * prefix[p];
      return;
    }
    for (int i = 0; i < r; ++i) {
      tuple[depth] = i;
      if (depth >= 1)
        prefix[depth] = depth == 1 ? Matrix(block(tuple[0], tuple[1]))
                                   : Matrix(prefix[depth - 1] * block(tuple[depth - 1], i));
      walk(depth + 1);
    }
  };
  walk(0);
  return factorial(p) * (D.basis * result * D.basis.adjoint());
}

Complex trace_derivative(const SmoothFunction& f, const SpectralDecomposition& D,
                         const HermitianOperator& V, int p, TraceMethod method) {
  if (p < 1) throw std::invalid_argument("trace derivative needs order >= 1");
  switch (method) {
    case TraceMethod::M1Form: {
      const MultiSpectralMeasure mu = build_m1(D, V, p);
      DividedDifferenceCache dd(f, mu.atoms());
      const int arity = p + 1, r = mu.atom_count();
      std::vector<int> idx(arity, 0);
      Complex acc = 0.0;
      std::size_t flat = 0;
      while (true) {
        const Complex w = mu.weights()[flat];
        if (w != Complex(0.0)) acc += w * dd.at(idx);
        ++flat;
        int d = arity - 1;
        while (d >= 0 && ++idx[d] == r) idx[d--] = 0;
        if (d < 0) break;
      }
      return factorial(p) * acc;
    }
    case TraceMethod::MForm: {
      const MultiSpectralMeasure mu = build_m(D, V, p);
      const SmoothFunction fprime = f.derivative();
      DividedDifferenceCache dd(fprime, mu.atoms());
      const int arity = p, r = mu.atom_count();
      std::vector<int> idx(arity, 0);
      Complex acc = 0.0;
      std::size_t flat = 0;
      while (true) {
        const Complex w = mu.weights()[flat];
        if (w != Complex(0.0)) acc += w * dd.at(idx);
        ++flat;
        int d = arity - 1;
        while (d >= 0 && ++idx[d] == r) idx[d--] = 0;
        if (d < 0) break;
      }
      return factorial(p - 1) * acc;
    }
    case TraceMethod::OperatorTrace:
      return operator_derivative(f, D, V, p).trace();
    case TraceMethod::FiniteDifference: {
      const Matrix H0 = D.reconstruct();
      const double norm_h0 = H0.cwiseAbs().rowwise().sum().maxCoeff();
      const double norm_v = V.matrix().norm();
      // The stencils divide by h^p, so eigensolver noise forces h upward as p
      // grows; Richardson extrapolation keeps the truncation in check. One
      // level at h ~ 1e-3 suffices for the O(h^4) stencils (p <= 2); the
      // O(h^2) stencils (p >= 3) get two levels at h ~ 0.1.
      const double eps = std::numeric_limits<double>::epsilon();
      const double scale = (1.0 + norm_h0) / (1.0 + norm_v);
      const double h =
          (p <= 2 ? std::max(1e-3, std::pow(eps, 1.0 / double(p + 4))) : 0.1) * scale;
      const int levels = p <= 2 ? 1 : 2;
      const double base_order = p <= 2 ? 4.0 : 2.0;
      const auto g = [&](double x) -> Complex {
        return trace_of_matrix_function(f, Matrix(H0 + x * V.matrix()));
      };
      std::vector<Complex> row(levels + 1);
      for (int i = 0; i <= levels; ++i)
        row[i] = stencil_derivative(g, p, h / double(1 << i));
      for (int l = 0; l < levels; ++l) {
        const double factor = std::pow(2.0, base_order + 2.0 * l);
        for (int i = 0; i < levels - l; ++i)
          row[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
      }
      return row[0];
    }
  }
  throw std::invalid_argument("unknown trace method");
}

PiecewisePolynomial measure_spline_kernel(const MultiSpectralMeasure& mu) {
  // Splines depend only on the knot multiset; share them across tuples.
  std::map<std::vector<int>, PiecewisePolynomial> splines;
  std::vector<Complex> scalars;
  std::vector<const PiecewisePolynomial*> terms;
  const int arity = mu.arity(), r = mu.atom_count();
  std::vector<int> idx(arity, 0);
  std::size_t flat = 0;
  while (true) {
    const Complex w = mu.weights()[flat];
    if (w != Complex(0.0)) {
      std::vector<int> key(idx.begin(), idx.end());
      std::sort(key.begin(), key.end());
      auto it = splines.find(key);
      if (it == splines.end()) {
        std::vector<double> knots(key.size());
        for (size_t i = 0; i < key.size(); ++i) knots[i] = mu.atoms()[key[i]];
        it = splines.emplace(key, spline_antiderivative(KnotMultiset(std::move(knots), 0.0)))
                 .first;
      }
      scalars.push_back(w);
      terms.push_back(&it->second);
    }
    ++flat;
    int d = arity - 1;
    while (d >= 0 && ++idx[d] == r) idx[d--] = 0;
    if (d < 0) break;
  }
  if (terms.empty()) return PiecewisePolynomial();
  return pp_combine(std::span<const Complex>(scalars),
                    std::span<const PiecewisePolynomial* const>(terms));
}

KernelTraceIdentity kernel_trace_identity(const SmoothFunction& f,
                                          const SpectralDecomposition& D,
                                          const HermitianOperator& V, int p, double a,
                                          double b) {
  if (p < 1) throw std::invalid_argument("kernel identity needs order >= 1");
  const Eigen::SelfAdjointEigenSolver<Matrix> perturbed(D.reconstruct() + V.matrix());
  if (perturbed.info() != Eigen::Success) throw EvalError("eigensolver failed to converge");
  const double lo = std::min(D.eigenvalues.front(), perturbed.eigenvalues().minCoeff());
  const double hi = std::max(D.eigenvalues.back(), perturbed.eigenvalues().maxCoeff());
  if (lo < a || hi > b)
    throw std::invalid_argument("interval must contain the spectra of H0 and H0+V");

  KernelTraceIdentity out;
  out.lhs = trace_derivative(f, D, V, p, TraceMethod::OperatorTrace) -
            trace_power(V, p) * f.eval_derivative(a, p);
  out.rhs_m1 = pp_integrate_against(measure_spline_kernel(build_m1(D, V, p)), f, p + 1, a, b);
  out.rhs_m = pp_integrate_against(measure_spline_kernel(build_m(D, V, p)), f, p + 1, a, b);
  return out;
}

}  // namespace specshift
