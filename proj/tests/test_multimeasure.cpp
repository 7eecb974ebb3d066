#include <doctest.h>

#include <cmath>

#include "specshift/errors.hpp"
#include "specshift/moi.hpp"
#include "specshift/multimeasure.hpp"
#include "specshift/random.hpp"

using namespace specshift;

namespace {

// The 2x2 pair used throughout: H0 = diag(0,1), V the spin flip.
struct FlipPair {
  HermitianOperator h0;
  HermitianOperator v;
  SpectralDecomposition d;
  FlipPair() : h0(make_h0()), v(make_v()), d(decompose(h0)) {}
  static HermitianOperator make_h0() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 1.0;
    return HermitianOperator(m);
  }
  static HermitianOperator make_v() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return HermitianOperator(m);
  }
};

}  // namespace

TEST_CASE("scalar atoms") {
  Matrix h0(1, 1), v(1, 1);
  h0 << 2.5;
  v << -0.75;
  const auto d = decompose(HermitianOperator(h0));
  for (int p = 1; p <= 4; ++p) {
    const auto m = build_m(d, HermitianOperator(v), p);
    REQUIRE(m.weights().size() == 1);
    CHECK(std::abs(m.weights()[0] - Complex(std::pow(-0.75, p))) <= 1e-14);
    CHECK(std::abs(m.total_mass() - trace_power(HermitianOperator(v), p)) <= 1e-14);
    CHECK(total_variation(m) == doctest::Approx(std::pow(0.75, p)));

    const auto m1 = build_m1(d, HermitianOperator(v), p);
    REQUIRE(m1.weights().size() == 1);
    CHECK(std::abs(m1.weights()[0] - m.weights()[0]) <= 1e-16);
  }
}

TEST_CASE("flip pair weights") {
  const FlipPair pair;
  const auto m = build_m(pair.d, pair.v, 2);
  REQUIRE(m.atom_count() == 2);
  const int i00[] = {0, 0}, i01[] = {0, 1}, i10[] = {1, 0}, i11[] = {1, 1};
  CHECK(std::abs(m.weight(i00)) <= 1e-14);
  CHECK(std::abs(m.weight(i01) - Complex(1.0)) <= 1e-14);
  CHECK(std::abs(m.weight(i10) - Complex(1.0)) <= 1e-14);
  CHECK(std::abs(m.weight(i11)) <= 1e-14);
  CHECK(total_variation(m) == doctest::Approx(2.0));

  // p = 1: the m1 weights are Tr[P_i V P_j] = delta_ij V_ii = 0 here.
  const auto m1 = build_m1(pair.d, pair.v, 1);
  for (const Complex& w : m1.weights()) CHECK(std::abs(w) <= 1e-14);
  CHECK(std::abs(m1.total_mass()) <= 1e-14);
}

TEST_CASE("integration against the measure") {
  const FlipPair pair;
  const auto m = build_m(pair.d, pair.v, 2);

  CHECK(std::abs(integrate_measure(m, [](std::span<const double>) { return Complex(1.0); }) -
                 trace_power(pair.v, 2)) <= 1e-13);

  // phi(l1, l2) = e^{i l1} e^{-i l2}: equals Tr[e^{iH0} V e^{-iH0} V] = 2 cos 1.
  const Complex via_measure = integrate_measure(m, [](std::span<const double> l) {
    return std::exp(Complex(0, l[0])) * std::exp(Complex(0, -l[1]));
  });
  CHECK(std::abs(via_measure - Complex(2.0 * std::cos(1.0))) <= 1e-12);
  // Cross-check against Tr[e^{iH0} V e^{-iH0} V]; H0 is diagonal here.
  Matrix phase = Matrix::Identity(2, 2);
  phase(1, 1) = std::exp(Complex(0, 1));
  const Complex via_matrices =
      (phase * pair.v.matrix() * phase.adjoint() * pair.v.matrix()).trace();
  CHECK(std::abs(via_measure - via_matrices) <= 1e-12);
}

TEST_CASE("measure invariants on random pairs") {
  Rng rng(41);
  for (int it = 0; it < 20; ++it) {
    const int n = 2 + it % 4;
    const HermitianOperator h0 = rng.hermitian(n, 1.0);
    const HermitianOperator v = rng.perturbation(n, rng.uniform(0.2, 1.0));
    const auto d = decompose(h0);
    for (int p = 1; p <= 3; ++p) {
      const auto m = build_m(d, v, p);
      const auto m1 = build_m1(d, v, p);
      const Complex tvp = trace_power(v, p);
      CHECK(std::abs(m.total_mass() - tvp) <= 1e-10);
      CHECK(std::abs(m1.total_mass() - tvp) <= 1e-10);
      // The Hilbert-Schmidt variation bound holds for p >= 2 (it fails for
      // p = 1: take V a multiple of the identity).
      if (p >= 2) {
        const double bound = std::pow(hs_norm(v), p);
        CHECK(total_variation(m) <= bound + 1e-9);
        CHECK(total_variation(m1) <= bound + 1e-9);
      }

      const int r = m.atom_count();
      std::vector<int> idx(p, 0), other(p);
      while (true) {
        const Complex w = m.weight(idx);
        // Cyclic shift invariance.
        for (int k = 0; k < p; ++k) other[k] = idx[(k + 1) % p];
        CHECK(std::abs(w - m.weight(other)) <= 1e-12);
        // Reversal conjugates.
        for (int k = 0; k < p; ++k) other[k] = idx[p - 1 - k];
        CHECK(std::abs(std::conj(w) - m.weight(other)) <= 1e-12);
        int dpos = p - 1;
        while (dpos >= 0 && ++idx[dpos] == r) idx[dpos--] = 0;
        if (dpos < 0) break;
      }

      // Marginalizing the trailing m1 index recovers m.
      idx.assign(p, 0);
      std::vector<int> ext(p + 1);
      while (true) {
        std::copy(idx.begin(), idx.end(), ext.begin());
        Complex sum = 0.0;
        for (int last = 0; last < r; ++last) {
          ext[p] = last;
          sum += m1.weight(ext);
        }
        CHECK(std::abs(sum - m.weight(idx)) <= 1e-12);
        int dpos = p - 1;
        while (dpos >= 0 && ++idx[dpos] == r) idx[dpos--] = 0;
        if (dpos < 0) break;
      }
    }
  }
}

TEST_CASE("first order weights compress the diagonal") {
  Rng rng(42);
  const HermitianOperator h0 = rng.hermitian(4, 1.0);
  const HermitianOperator v = rng.perturbation(4, 0.8);
  const auto d = decompose(h0);
  const auto m = build_m(d, v, 1);
  for (int i = 0; i < m.atom_count(); ++i) {
    const int idx[] = {i};
    const Complex expected = (d.projections[i] * v.matrix()).trace();
    CHECK(std::abs(m.weight(idx) - expected) <= 1e-12);
  }
  // integrate phi equals Tr[phi(H0) V] for scalar phi.
  const SmoothFunction phi = SmoothFunction::gaussian(0.0, 1.0);
  const Complex via_measure =
      integrate_measure(m, [&](std::span<const double> l) { return phi(l[0]); });
  const Complex direct = (apply_function(phi, d) * v.matrix()).trace();
  CHECK(std::abs(via_measure - direct) <= 1e-12);
}

TEST_CASE("envelope guard") {
  Rng rng(43);
  const HermitianOperator h0 = rng.hermitian(24, 1.0);
  const HermitianOperator v = rng.perturbation(24, 1.0);
  const auto d = decompose(h0);
  REQUIRE(d.cluster_count() == 24);  // random spectra are simple
  CHECK_THROWS_AS(build_m(d, v, 6), EnvelopeError);   // 24^6 > 1e7
  CHECK_THROWS_AS(build_m1(d, v, 5), EnvelopeError);  // 24^6 > 1e7
  CHECK_NOTHROW(build_m(d, v, 2));
}
