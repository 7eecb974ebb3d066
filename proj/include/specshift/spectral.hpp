#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specshift/funcspace.hpp"
#include "specshift/splines.hpp"

namespace specshift {

using Matrix = Eigen::MatrixXcd;

/// An n x n complex matrix, Hermitian within tolerance. Construction
/// validates max-entry deviation from the conjugate transpose against
/// 1e-10 * (1 + max |entry|) and stores the symmetrized (A + A*)/2.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);
  static HermitianOperator zero(int n);
  static HermitianOperator identity(int n);

  int dim() const { return int(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

/// Clustered eigendecomposition: distinct eigenvalues with orthogonal
/// spectral projections. `basis` holds the orthonormal eigenvectors with the
/// columns of cluster i occupying block_offsets[i] .. +multiplicities[i].
struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // distinct, increasing
  std::vector<int> multiplicities;
  std::vector<Matrix> projections;
  Matrix basis;
  std::vector<int> block_offsets;
  int dim = 0;

  int cluster_count() const { return int(eigenvalues.size()); }
  /// Sum of eigenvalue * projection; the operator the decomposition represents.
  Matrix reconstruct() const;
};

double default_cluster_tol(const HermitianOperator& H);

/// Eigendecomposition with eigenvalues within cluster_tol merged into one
/// cluster (representative: multiplicity-weighted mean); cluster projections
/// are re-orthogonalized symmetrically. cluster_tol < 0 selects the default.
SpectralDecomposition decompose(const HermitianOperator& H, double cluster_tol = -1.0);

/// f(H) = sum of f(lambda_i) P_i.
Matrix apply_function(const SmoothFunction& f, const SpectralDecomposition& D);

/// Right-continuous eigenvalue counting function N_H(t).
PiecewisePolynomial counting_step(const SpectralDecomposition& D);

/// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const HermitianOperator& V);

}  // namespace specshift
