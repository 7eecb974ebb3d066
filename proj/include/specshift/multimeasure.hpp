#pragma once

#include <functional>
#include <span>
#include <vector>

#include "specshift/spectral.hpp"

namespace specshift {

enum class MeasureVariant { M, M1 };

/// Discrete complex measure on tuples of distinct eigenvalues of H0:
/// variant M has arity p with weights Tr[P_{i1} V P_{i2} V ... P_{ip} V];
/// variant M1 has arity p+1 with the trailing projection P_{i_{p+1}}
/// appended. Weights are stored densely over index tuples (row-major, first
/// index most significant). Immutable and concurrently readable.
class MultiSpectralMeasure {
 public:
  MeasureVariant variant() const { return variant_; }
  int order() const { return order_; }
  int arity() const { return variant_ == MeasureVariant::M ? order_ : order_ + 1; }
  std::span<const double> atoms() const { return atoms_; }
  int atom_count() const { return int(atoms_.size()); }

  const std::vector<Complex>& weights() const { return weights_; }
  Complex weight(std::span<const int> indices) const;
  std::size_t flat_index(std::span<const int> indices) const;

  Complex total_mass() const;

 private:
  friend MultiSpectralMeasure build_m(const SpectralDecomposition&, const HermitianOperator&,
                                      int);
  friend MultiSpectralMeasure build_m1(const SpectralDecomposition&, const HermitianOperator&,
                                       int);
  MeasureVariant variant_ = MeasureVariant::M;
  int order_ = 0;
  std::vector<double> atoms_;
  std::vector<Complex> weights_;
};

/// Builds m_{p,H0,V}; all atom_count^p weights are computed by accumulating
/// block products of V in the eigenbasis. Throws EnvelopeError beyond 1e7
/// tuples.
MultiSpectralMeasure build_m(const SpectralDecomposition& D, const HermitianOperator& V, int p);

/// Builds m^{(1)}_{p,H0,V} on (p+1)-tuples.
MultiSpectralMeasure build_m1(const SpectralDecomposition& D, const HermitianOperator& V, int p);

/// Lebesgue integral: sum over tuples of weight * phi(lambda tuple).
Complex integrate_measure(const MultiSpectralMeasure& mu,
                          const std::function<Complex(std::span<const double>)>& phi);

double total_variation(const MultiSpectralMeasure& mu);

}  // namespace specshift
