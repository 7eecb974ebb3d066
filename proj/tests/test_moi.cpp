#include <doctest.h>

#include <cmath>

#include "specshift/errors.hpp"
#include "specshift/moi.hpp"
#include "specshift/random.hpp"

using namespace specshift;

namespace {

// Independent oracle: 5-point central finite difference of x -> f(H0 + xV)
// evaluated through fresh eigendecompositions.
Matrix finite_difference_derivative(const SmoothFunction& f, const HermitianOperator& h0,
                                    const HermitianOperator& v, int p, double h) {
  const auto value_at = [&](double x) {
    return apply_function(f, decompose(HermitianOperator(h0.matrix() + x * v.matrix())));
  };
  const Matrix g1 = value_at(h), gm1 = value_at(-h), g2 = value_at(2 * h),
               gm2 = value_at(-2 * h);
  switch (p) {
    case 1:
      return (-g2 + 8.0 * g1 - 8.0 * gm1 + gm2) / (12.0 * h);
    case 2:
      return (-g2 + 16.0 * g1 - 30.0 * value_at(0.0) + 16.0 * gm1 - gm2) / (12.0 * h * h);
    default:
      return (g2 - 2.0 * g1 + 2.0 * gm1 - gm2) / (2.0 * h * h * h);
  }
}

}  // namespace

TEST_CASE("first derivative of the square is the anticommutator") {
  Rng rng(51);
  const HermitianOperator h0 = rng.hermitian(4, 1.0);
  const HermitianOperator v = rng.perturbation(4, 0.9);
  const auto d = decompose(h0);
  const Matrix derivative = operator_derivative(SmoothFunction::polynomial({0, 0, 1}), d, v, 1);
  const Matrix expected = h0.matrix() * v.matrix() + v.matrix() * h0.matrix();
  CHECK((derivative - expected).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("scalar case is the chain rule") {
  Matrix h0(1, 1), v(1, 1);
  h0 << 0.4;
  v << 1.7;
  const auto d = decompose(HermitianOperator(h0));
  const SmoothFunction f = SmoothFunction::gaussian(0.0, 1.0);
  for (int p = 1; p <= 4; ++p) {
    const Matrix derivative = operator_derivative(f, d, HermitianOperator(v), p);
    const Complex expected = f.eval_derivative(0.4, p) * std::pow(1.7, p);
    CHECK(std::abs(derivative(0, 0) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("operator derivative matches finite differences") {
  Rng rng(52);
  for (int p = 1; p <= 3; ++p) {
    const HermitianOperator h0 = rng.hermitian(4, 1.0);
    const HermitianOperator v = rng.perturbation(4, 0.8);
    const auto d = decompose(h0);
    const SmoothFunction f = SmoothFunction::gaussian(0.1, 1.4);
    const Matrix exact = operator_derivative(f, d, v, p);
    const double h = 1e-3 * (1.0 + hs_norm(h0)) / (1.0 + hs_norm(v));
    const Matrix approx = finite_difference_derivative(f, h0, v, p, h);
    const double scale = 1.0 + exact.cwiseAbs().maxCoeff();
    CHECK((exact - approx).cwiseAbs().maxCoeff() <= 1e-5 * scale);
  }
}

TEST_CASE("operator derivative of a real function is hermitian") {
  Rng rng(53);
  const HermitianOperator h0 = rng.hermitian(5, 1.0);
  const HermitianOperator v = rng.perturbation(5, 1.0);
  const auto d = decompose(h0);
  for (int p = 1; p <= 3; ++p) {
    const Matrix derivative = operator_derivative(SmoothFunction::gaussian(0.0, 1.2), d, v, p);
    CHECK((derivative - derivative.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("trace derivative examples") {
  Matrix h0m = Matrix::Zero(2, 2), vm(2, 2);
  h0m(1, 1) = 1.0;
  vm << 0, 1, 1, 0;
  const HermitianOperator h0(h0m), v(vm);
  const auto d = decompose(h0);

  // Frozen from expanding Tr (H0 + xV)^3: the x^2 coefficient is 3 Tr[H0 V^2] = 3.
  const SmoothFunction cube = SmoothFunction::polynomial({0, 0, 0, 1});
  for (const TraceMethod method : {TraceMethod::M1Form, TraceMethod::MForm,
                                   TraceMethod::OperatorTrace}) {
    CHECK(std::abs(trace_derivative(cube, d, v, 2, method) - Complex(6.0)) <= 1e-10);
  }
  CHECK(std::abs(trace_derivative(cube, d, v, 2, TraceMethod::FiniteDifference) -
                 Complex(6.0)) <= 1e-6);

  const SmoothFunction linear = SmoothFunction::polynomial({3, 2});
  for (int p = 2; p <= 3; ++p)
    CHECK(std::abs(trace_derivative(linear, d, v, p, TraceMethod::OperatorTrace)) <= 1e-12);
}

TEST_CASE("four-way agreement on random input") {
  Rng rng(54);
  for (int it = 0; it < 6; ++it) {
    const int n = 2 + it % 3;
    const HermitianOperator h0 = rng.hermitian(n, 1.0);
    const HermitianOperator v = rng.perturbation(n, rng.uniform(0.3, 1.0));
    const auto d = decompose(h0);
    const SmoothFunction f =
        it % 2 ? SmoothFunction::exponential(1.0)
               : SmoothFunction::rational({{Complex(0, 1), 1.0}, {Complex(0, -1), 1.0}});
    for (int p = 1; p <= 4; ++p) {
      const Complex m1 = trace_derivative(f, d, v, p, TraceMethod::M1Form);
      const Complex m = trace_derivative(f, d, v, p, TraceMethod::MForm);
      const Complex op = trace_derivative(f, d, v, p, TraceMethod::OperatorTrace);
      const Complex fd = trace_derivative(f, d, v, p, TraceMethod::FiniteDifference);
      const double scale = 1.0 + std::abs(op);
      CHECK(std::abs(m1 - op) <= 1e-9 * scale);
      CHECK(std::abs(m - op) <= 1e-9 * scale);
      CHECK(std::abs(fd - op) <= 1e-5 * scale);
    }
  }
}

TEST_CASE("first order trace identity") {
  Rng rng(55);
  const HermitianOperator h0 = rng.hermitian(5, 1.0);
  const HermitianOperator v = rng.perturbation(5, 0.7);
  const auto d = decompose(h0);
  for (const char* spec : {"gauss:0,1", "exp:1", "poly:1,0,-2,1"}) {
    const SmoothFunction f = parse_function_spec(spec);
    const Complex via_trace = trace_derivative(f, d, v, 1, TraceMethod::OperatorTrace);
    const Complex direct = (apply_function(f.derivative(), d) * v.matrix()).trace();
    CHECK(std::abs(via_trace - direct) <= 1e-10 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("kernel trace identity") {
  Rng rng(56);

  // Degree-p monomial: both sides collapse to zero.
  {
    const HermitianOperator h0 = rng.hermitian(3, 1.0);
    const HermitianOperator v = rng.perturbation(3, 0.8);
    const auto d = decompose(h0);
    const SmoothFunction square = SmoothFunction::polynomial({0, 0, 1});
    const auto identity = kernel_trace_identity(square, d, v, 2, -10.0, 10.0);
    CHECK(std::abs(identity.lhs) <= 1e-10);
    CHECK(std::abs(identity.rhs_m1) <= 1e-10);
    CHECK(std::abs(identity.rhs_m) <= 1e-10);
  }

  // Zero perturbation: everything vanishes.
  {
    const HermitianOperator h0 = rng.hermitian(3, 1.0);
    const auto d = decompose(h0);
    const auto identity = kernel_trace_identity(SmoothFunction::gaussian(0, 1), d,
                                                HermitianOperator::zero(3), 2, -10.0, 10.0);
    CHECK(std::abs(identity.lhs) <= 1e-12);
    CHECK(std::abs(identity.rhs_m1) <= 1e-12);
    CHECK(std::abs(identity.rhs_m) <= 1e-12);
  }

  // Random pair at p = 3 with a gaussian.
  {
    const HermitianOperator h0 = rng.hermitian(3, 1.0);
    const HermitianOperator v = rng.perturbation(3, 0.9);
    const auto d = decompose(h0);
    const auto identity =
        kernel_trace_identity(SmoothFunction::gaussian(0, 1), d, v, 3, -8.0, 8.0);
    const double scale = 1.0 + std::abs(identity.lhs);
    CHECK(std::abs(identity.lhs - identity.rhs_m1) <= 1e-8 * scale);
    CHECK(std::abs(identity.lhs - identity.rhs_m) <= 1e-8 * scale);
  }

  // The window must contain both spectra.
  {
    const HermitianOperator h0 = rng.hermitian(3, 1.0);
    const HermitianOperator v = rng.perturbation(3, 0.5);
    const auto d = decompose(h0);
    CHECK_THROWS_AS(kernel_trace_identity(SmoothFunction::gaussian(0, 1), d, v, 2, 0.0, 0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("trace power") {
  Matrix vm(2, 2);
  vm << 0, 1, 1, 0;
  const HermitianOperator v(vm);
  CHECK(trace_power(v, 1) == Complex(0.0));
  CHECK(trace_power(v, 2) == Complex(2.0));
  CHECK(trace_power(v, 3) == Complex(0.0));
  CHECK(trace_power(v, 0) == Complex(2.0));
}
