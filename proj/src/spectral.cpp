#include "specshift/spectral.hpp"

#include <Eigen/Eigenvalues>

#include "specshift/errors.hpp"

namespace specshift {

HermitianOperator::HermitianOperator(Matrix entries) {
  if (entries.rows() < 1 || entries.rows() != entries.cols())
    throw std::invalid_argument("matrix must be square with n >= 1");
  const double max_entry = entries.cwiseAbs().maxCoeff();
  const double deviation = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > 1e-10 * (1.0 + max_entry))
    throw HermiticityError("matrix is not Hermitian within tolerance");
  matrix_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::zero(int n) {
  return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(int n) {
  return HermitianOperator(Matrix::Identity(n, n));
}

Matrix SpectralDecomposition::reconstruct() const {
  Matrix H = Matrix::Zero(dim, dim);
  for (size_t i = 0; i < eigenvalues.size(); ++i) H += eigenvalues[i] * projections[i];
  return H;
}

double default_cluster_tol(const HermitianOperator& H) {
  // Row-sum norm as a cheap spectral-norm bound.
  const double estimate = H.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  return 1e-8 * (1.0 + estimate);
}

SpectralDecomposition decompose(const HermitianOperator& H, double cluster_tol) {
  if (cluster_tol < 0.0) cluster_tol = default_cluster_tol(H);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H.matrix());
  if (solver.info() != Eigen::Success) throw EvalError("eigensolver failed to converge");
  const Eigen::VectorXd values = solver.eigenvalues();  // ascending
  const Matrix vectors = solver.eigenvectors();

  SpectralDecomposition D;
  D.dim = H.dim();
  D.basis = Matrix(D.dim, D.dim);

  int begin = 0;
  for (int i = 1; i <= D.dim; ++i) {
    if (i == D.dim || values[i] - values[i - 1] > cluster_tol) {
      const int count = i - begin;
      D.eigenvalues.push_back(values[begin] == values[i - 1]
                                  ? values[begin]
                                  : values.segment(begin, count).mean());
      D.multiplicities.push_back(count);
      D.block_offsets.push_back(begin);
      // Symmetric (Loewdin) re-orthogonalization of the cluster block.
      const Matrix block = vectors.middleCols(begin, count);
      const Matrix overlap = block.adjoint() * block;
      Eigen::SelfAdjointEigenSolver<Matrix> ortho(overlap);
      if (ortho.info() != Eigen::Success) throw EvalError("orthogonalization failed");
      const Matrix inv_sqrt = ortho.eigenvectors() *
                              ortho.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                              ortho.eigenvectors().adjoint();
      const Matrix q = block * inv_sqrt;
      D.basis.middleCols(begin, count) = q;
      D.projections.push_back(q * q.adjoint());
      begin = i;
    }
  }
  return D;
}

Matrix apply_function(const SmoothFunction& f, const SpectralDecomposition& D) {
  Matrix out = Matrix::Zero(D.dim, D.dim);
  for (size_t i = 0; i < D.eigenvalues.size(); ++i) out += f(D.eigenvalues[i]) * D.projections[i];
  return out;
}

PiecewisePolynomial counting_step(const SpectralDecomposition& D) {
  if (D.cluster_count() == 1)
    return PiecewisePolynomial::step(D.eigenvalues[0], 0.0, double(D.dim));
  std::vector<double> breakpoints(D.eigenvalues.begin(), D.eigenvalues.end());
  std::vector<std::vector<Complex>> pieces;
  double count = 0.0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    count += D.multiplicities[i];
    pieces.push_back({Complex(count)});
  }
  return PiecewisePolynomial(std::move(breakpoints), std::move(pieces), 0.0, double(D.dim));
}

double hs_norm(const HermitianOperator& V) { return V.matrix().norm(); }

}  // namespace specshift
