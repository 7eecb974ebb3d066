#pragma once

#include <functional>
#include <span>
#include <vector>

#include "specshift/funcspace.hpp"

namespace specshift {

/// Knot list for a divided difference of order size()-1, clustered so that
/// any two knots are either identical or separated by more than the cluster
/// tolerance. Knots within tolerance of each other are snapped to their
/// cluster mean; the default tolerance is 1e-8 * (1 + max |knot|).
class KnotMultiset {
 public:
  explicit KnotMultiset(std::vector<double> knots, double cluster_tolerance = -1.0);

  std::span<const double> knots() const { return knots_; }
  int order() const { return int(knots_.size()) - 1; }
  double cluster_tolerance() const { return tolerance_; }

  std::span<const double> distinct() const { return distinct_; }
  std::span<const int> multiplicities() const { return multiplicities_; }
  int max_multiplicity() const;

  double min() const { return knots_.front(); }
  double max() const { return knots_.back(); }
  bool all_coincident() const { return distinct_.size() == 1; }

 private:
  std::vector<double> knots_;  // sorted ascending, equal knots adjacent
  std::vector<double> distinct_;
  std::vector<int> multiplicities_;
  double tolerance_;
};

/// Anything that can report exact derivative values f^(k)(t).
using DerivativeOracle = std::function<Complex(double t, int order)>;

/// Confluent divided difference via a Newton table; repeated-knot entries are
/// seeded with f^(j)(lambda)/j!.
Complex divided_difference(const DerivativeOracle& f, const KnotMultiset& knots);
Complex divided_difference(const SmoothFunction& f, const KnotMultiset& knots);

/// Closed form for the difference with one knot of the distinct base list
/// repeated: the f'(lambda_i) term plus the double-difference sum.
Complex repeated_knot_formula(const SmoothFunction& f, std::span<const double> base_knots,
                              int repeat_index);

/// Divided difference of e^{i s lambda} computed through the ordered-simplex
/// integral with a unit point mass at s, by tensorized Gauss-Legendre with 32
/// nodes per dimension. Supports order <= 3.
Complex exponential_simplex_dd(double s, const KnotMultiset& knots);

}  // namespace specshift
