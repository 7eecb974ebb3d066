#include "specshift/random.hpp"

namespace specshift {

HermitianOperator Rng::hermitian(int n, double scale) {
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = complex_in_square(scale);
  return HermitianOperator(0.5 * (m + Matrix(m.adjoint())));
}

HermitianOperator Rng::perturbation(int n, double hs_norm_target) {
  const HermitianOperator raw = hermitian(n, 1.0);
  const double norm = hs_norm(raw);
  if (norm == 0.0) return raw;
  return HermitianOperator(raw.matrix() * (hs_norm_target / norm));
}

}  // namespace specshift
