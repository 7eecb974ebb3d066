#include "specshift/multimeasure.hpp"

#include <cmath>

#include "specshift/errors.hpp"

namespace specshift {

namespace {

constexpr double kTupleEnvelope = 1e7;

std::size_t checked_tuple_count(int r, int arity) {
  double count = 1.0;
  for (int i = 0; i < arity; ++i) count *= r;
  if (count > kTupleEnvelope)
    throw EnvelopeError("tuple count exceeds the desk-scale envelope (1e7 atoms)");
  return std::size_t(count);
}

// V compressed to the eigenbasis; block (a, b) couples clusters a and b.
struct CompressedPerturbation {
  Matrix vbasis;
  const SpectralDecomposition* D;
  Eigen::Block<const Matrix> block(int a, int b) const {
    return vbasis.block(D->block_offsets[a], D->block_offsets[b], D->multiplicities[a],
                        D->multiplicities[b]);
  }
};

// Walks all tuples (i1..i_arity) in row-major order carrying the running
// block product B(i1,i2) B(i2,i3) ... ; `emit` receives the tuple and the
// product over its consecutive pairs.
void walk_tuples(const CompressedPerturbation& vp, int arity, std::vector<int>& tuple,
                 const Matrix& prefix, int depth,
                 const std::function<void(std::span<const int>, const Matrix&)>& emit) {
  const int r = vp.D->cluster_count();
  if (depth == arity) {
    emit(tuple, prefix);
    return;
  }
  for (int i = 0; i < r; ++i) {
    tuple[depth] = i;
    if (depth == 0) {
      walk_tuples(vp, arity, tuple, Matrix(), 1, emit);
    } else {
      Matrix next;
      if (depth == 1)
        next = vp.block(tuple[0], tuple[1]);
      else
        next = prefix * vp.block(tuple[depth - 1], tuple[depth]);
      walk_tuples(vp, arity, tuple, next, depth + 1, emit);
    }
  }
}

}  // namespace

std::size_t MultiSpectralMeasure::flat_index(std::span<const int> indices) const {
  std::size_t idx = 0;
  for (int i : indices) idx = idx * atoms_.size() + std::size_t(i);
  return idx;
}

Complex MultiSpectralMeasure::weight(std::span<const int> indices) const {
  if (int(indices.size()) != arity()) throw std::invalid_argument("index tuple arity mismatch");
  return weights_[flat_index(indices)];
}

Complex MultiSpectralMeasure::total_mass() const {
  Complex acc = 0.0;
  for (const Complex& w : weights_) acc += w;
  return acc;
}

MultiSpectralMeasure build_m(const SpectralDecomposition& D, const HermitianOperator& V, int p) {
  if (p < 1) throw std::invalid_argument("measure order must be >= 1");
  if (V.dim() != D.dim) throw std::invalid_argument("dimension mismatch between V and H0");
  const int r = D.cluster_count();
  const std::size_t count = checked_tuple_count(r, p);

  MultiSpectralMeasure mu;
  mu.variant_ = MeasureVariant::M;
  mu.order_ = p;
  mu.atoms_.assign(D.eigenvalues.begin(), D.eigenvalues.end());
  mu.weights_.assign(count, Complex(0.0));

  CompressedPerturbation vp{D.basis.adjoint() * V.matrix() * D.basis, &D};
  std::vector<int> tuple(p);
  std::size_t flat = 0;
  walk_tuples(vp, p, tuple, Matrix(), 0,
              [&](std::span<const int> idx, const Matrix& prefix) {
                // w = Tr[ B(i1,i2)...B(i_{p-1},i_p) B(i_p,i_1) ]
                Complex w;
                if (p == 1)
                  w = vp.block(idx[0], idx[0]).trace();
                else
                  w = (prefix * vp.block(idx[p - 1], idx[0])).trace();
                mu.weights_[flat++] = w;
              });
  return mu;
}

MultiSpectralMeasure build_m1(const SpectralDecomposition& D, const HermitianOperator& V, int p) {
  if (p < 1) throw std::invalid_argument("measure order must be >= 1");
  if (V.dim() != D.dim) throw std::invalid_argument("dimension mismatch between V and H0");
  const int r = D.cluster_count();
  const std::size_t count = checked_tuple_count(r, p + 1);

  MultiSpectralMeasure mu;
  mu.variant_ = MeasureVariant::M1;
  mu.order_ = p;
  mu.atoms_.assign(D.eigenvalues.begin(), D.eigenvalues.end());
  mu.weights_.assign(count, Complex(0.0));

  CompressedPerturbation vp{D.basis.adjoint() * V.matrix() * D.basis, &D};
  std::vector<int> tuple(p + 1);
  std::size_t flat = 0;
  walk_tuples(vp, p + 1, tuple, Matrix(), 0,
              [&](std::span<const int> idx, const Matrix& chain) {
                // w = Tr[ B(i1,i2)...B(i_p,i_{p+1}) P_{i_{p+1}} ]; the blocks
                // are disjoint, so the trace vanishes unless i_{p+1} == i1.
                mu.weights_[flat++] = (idx[p] == idx[0]) ? chain.trace() : Complex(0.0);
              });
  return mu;
}

Complex integrate_measure(const MultiSpectralMeasure& mu,
                          const std::function<Complex(std::span<const double>)>& phi) {
  const int arity = mu.arity();
  const int r = mu.atom_count();
  std::vector<int> idx(arity, 0);
  std::vector<double> point(arity);
  Complex acc = 0.0;
  std::size_t flat = 0;
  while (true) {
    for (int d = 0; d < arity; ++d) point[d] = mu.atoms()[idx[d]];
    acc += mu.weights()[flat] * phi(point);
    ++flat;
    int d = arity - 1;
    while (d >= 0 && ++idx[d] == r) idx[d--] = 0;
    if (d < 0) break;
  }
  return acc;
}

double total_variation(const MultiSpectralMeasure& mu) {
  double acc = 0.0;
  for (const Complex& w : mu.weights()) acc += std::abs(w);
  return acc;
}

}  // namespace specshift
