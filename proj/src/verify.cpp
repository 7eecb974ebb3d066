#include "specshift/verify.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "specshift/io.hpp"
#include "specshift/moi.hpp"
#include "specshift/random.hpp"
#include "specshift/ssf.hpp"

namespace specshift {

namespace {

using nlohmann::json;

double factorial(int k) {
  double r = 1.0;
  for (int m = 2; m <= k; ++m) r *= m;
  return r;
}

double rel_gap(Complex a, Complex b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

json complex_record(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// Test functions exercised at order p; polynomial/rational entries carry the
/// tighter tolerance.
struct SuiteFunction {
  std::string spec;
  double trace_tol;
};

std::vector<SuiteFunction> function_suite(int p) {
  std::vector<SuiteFunction> suite;
  std::string monomial = "poly:";
  for (int j = 0; j < p; ++j) monomial += "0,";
  monomial += "1";
  suite.push_back({monomial, 1e-8});
  std::string dense = "poly:";
  for (int j = 0; j <= p + 3; ++j) {
    if (j) dense += ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", (j % 2 ? -1.0 : 1.0) / double(1 + j));
    dense += buf;
  }
  suite.push_back({dense, 1e-8});
  for (const char* s : {"exp:1", "exp:-1", "exp:2", "exp:-2"}) suite.push_back({s, 1e-6});
  suite.push_back({"gauss:0,1", 1e-6});
  for (const char* s : {"rat:i", "rat:-i", "rat:2i", "rat:-2i"}) suite.push_back({s, 1e-8});
  suite.push_back({"sum:(-0.5i*rat:i;0.5i*rat:-i)", 1e-8});
  return suite;
}

struct Record {
  std::string line;
  bool pass = true;
};

class Recorder {
 public:
  explicit Recorder(std::string pair_label) : pair_label_(std::move(pair_label)) {}

  void add(json r, bool pass) {
    r["pair"] = pair_label_;
    r["pass"] = pass;
    records_.push_back({r.dump(), pass});
  }

  std::vector<Record> take() { return std::move(records_); }

 private:
  std::string pair_label_;
  std::vector<Record> records_;
};

void check_measure_facts(const SpectralDecomposition& d0, const HermitianOperator& v, int p,
                         Recorder& rec) {
  const MultiSpectralMeasure m = build_m(d0, v, p);
  const MultiSpectralMeasure m1 = build_m1(d0, v, p);
  const Complex trace_vp = trace_power(v, p);
  const double norm_bound = std::pow(hs_norm(v), p);

  const double mass_err =
      std::max(std::abs(m.total_mass() - trace_vp), std::abs(m1.total_mass() - trace_vp));
  rec.add(json{{"check", "measure_mass"},
               {"p", p},
               {"mass", complex_record(m.total_mass())},
               {"trace_vp", complex_record(trace_vp)},
               {"abs_err", mass_err},
               {"tol", 1e-10}},
          mass_err <= 1e-10);

  // The Hilbert-Schmidt bound on the variation needs p >= 2; a scalar
  // multiple of the identity breaks it at p = 1.
  if (p >= 2) {
    const double variation = std::max(total_variation(m), total_variation(m1));
    rec.add(json{{"check", "measure_variation"},
                 {"p", p},
                 {"variation", variation},
                 {"bound", norm_bound},
                 {"tol", 1e-9}},
            variation <= norm_bound + 1e-9);
  }

  // Cyclic shifts of the m-variant leave weights unchanged.
  const int r = m.atom_count();
  double cyclic_err = 0.0, hermitian_err = 0.0;
  std::vector<int> idx(p, 0), shifted(p), reversed(p);
  while (true) {
    for (int d = 0; d < p; ++d) shifted[d] = idx[(d + 1) % p];
    for (int d = 0; d < p; ++d) reversed[d] = idx[p - 1 - d];
    const Complex w = m.weight(idx);
    cyclic_err = std::max(cyclic_err, std::abs(w - m.weight(shifted)));
    hermitian_err = std::max(hermitian_err, std::abs(std::conj(w) - m.weight(reversed)));
    int d = p - 1;
    while (d >= 0 && ++idx[d] == r) idx[d--] = 0;
    if (d < 0) break;
  }
  rec.add(json{{"check", "measure_cyclic"}, {"p", p}, {"abs_err", cyclic_err}, {"tol", 1e-12}},
          cyclic_err <= 1e-12);
  rec.add(json{{"check", "measure_hermitian"},
               {"p", p},
               {"abs_err", hermitian_err},
               {"tol", 1e-12}},
          hermitian_err <= 1e-12);

  // Marginalizing the trailing index of m1 recovers m.
  double marginal_err = 0.0;
  idx.assign(p, 0);
  std::vector<int> extended(p + 1);
  while (true) {
    std::copy(idx.begin(), idx.end(), extended.begin());
    Complex sum = 0.0;
    for (int last = 0; last < r; ++last) {
      extended[p] = last;
      sum += m1.weight(extended);
    }
    marginal_err = std::max(marginal_err, std::abs(sum - m.weight(idx)));
    int d = p - 1;
    while (d >= 0 && ++idx[d] == r) idx[d--] = 0;
    if (d < 0) break;
  }
  rec.add(
      json{{"check", "measure_marginal"}, {"p", p}, {"abs_err", marginal_err}, {"tol", 1e-12}},
      marginal_err <= 1e-12);
}

void check_density_facts(const HermitianOperator& h0, const HermitianOperator& v, int p,
                         double cluster_tol, bool corrupt, Recorder& rec) {
  SsfResult nup1 = ssf_density(h0, v, p, SsfVariant::Nup1, cluster_tol);
  SsfResult nup2 = ssf_density(h0, v, p, SsfVariant::Nup2, cluster_tol);
  if (corrupt) {
    nup1.density = pp_combine({Complex(1.0 + 1e-3)}, {nup1.density});
    nup1.mass = pp_integral(nup1.density);
  }

  const Complex expected_mass = trace_power(v, p) / factorial(p);
  const double mass_err = std::abs(nup1.mass - expected_mass);
  rec.add(json{{"check", "density_mass"},
               {"p", p},
               {"mass", complex_record(nup1.mass)},
               {"expected", complex_record(expected_mass)},
               {"abs_err", mass_err},
               {"tol", 1e-9}},
          mass_err <= 1e-9);

  // 100 points outside the hull, half on each side.
  const double span = nup1.hull_max - nup1.hull_min + 1.0;
  double support_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double offset = span * (1.0 + double(i)) / 50.0;
    support_err = std::max(support_err, std::abs(nup1.density(nup1.hull_min - offset)));
    support_err = std::max(support_err, std::abs(nup1.density(nup1.hull_max + offset)));
  }
  rec.add(json{{"check", "density_support"},
               {"p", p},
               {"hull", json::array({nup1.hull_min, nup1.hull_max})},
               {"abs_err", support_err},
               {"tol", 1e-12}},
          support_err <= 1e-12);

  double imag_err = 0.0, variant_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = nup1.hull_min + (nup1.hull_max - nup1.hull_min) * double(i) / 999.0;
    const Complex a = nup1.density(t);
    imag_err = std::max(imag_err, std::abs(a.imag()));
    variant_err = std::max(variant_err, std::abs(a - nup2.density(t)));
  }
  rec.add(json{{"check", "density_real"}, {"p", p}, {"abs_err", imag_err}, {"tol", 1e-9}},
          imag_err <= 1e-9);
  rec.add(
      json{{"check", "variant_agreement"}, {"p", p}, {"abs_err", variant_err}, {"tol", 1e-9}},
      variant_err <= 1e-9);
}

void check_pair(const HermitianOperator& h0, const HermitianOperator& v,
                const VerifyOptions& options, Recorder& rec) {
  const SpectralDecomposition d0 = decompose(h0, options.cluster_tol);
  const double pad = 0.1 * (1.0 + hs_norm(h0) + hs_norm(v));
  const Eigen::SelfAdjointEigenSolver<Matrix> perturbed(h0.matrix() + v.matrix());
  const double a = std::min(d0.eigenvalues.front(), perturbed.eigenvalues().minCoeff()) - pad;
  const double b = std::max(d0.eigenvalues.back(), perturbed.eigenvalues().maxCoeff()) + pad;

  for (int p = 1; p <= options.p_max; ++p) {
    check_measure_facts(d0, v, p, rec);
    check_density_facts(h0, v, p, options.cluster_tol, options.corrupt_density, rec);

    SsfResult ssf = ssf_density(h0, v, p, SsfVariant::Nup1, options.cluster_tol);
    if (options.corrupt_density) ssf.density = pp_combine({Complex(1.0 + 1e-3)}, {ssf.density});

    for (const SuiteFunction& sf : function_suite(p)) {
      const SmoothFunction f = parse_function_spec(sf.spec);

      // Trace formula, against the density computed above.
      const Complex trace_side = taylor_remainder(f, h0, v, p, options.cluster_tol).trace();
      const Complex integral_side = pp_integrate_against(ssf.density, f, p);
      const double abs_err = std::abs(trace_side - integral_side);
      const double rel_err = abs_err / (1.0 + std::abs(trace_side));
      rec.add(json{{"check", "trace_formula"},
                   {"p", p},
                   {"function_spec", sf.spec},
                   {"variant", "nup1"},
                   {"trace_side", complex_record(trace_side)},
                   {"integral_side", complex_record(integral_side)},
                   {"abs_err", abs_err},
                   {"rel_err", rel_err},
                   {"tol", sf.trace_tol}},
              rel_err <= sf.trace_tol);

      // Four-way agreement of the trace-derivative routes.
      const Complex via_m1 = trace_derivative(f, d0, v, p, TraceMethod::M1Form);
      const Complex via_m = trace_derivative(f, d0, v, p, TraceMethod::MForm);
      const Complex via_op = trace_derivative(f, d0, v, p, TraceMethod::OperatorTrace);
      const Complex via_fd = trace_derivative(f, d0, v, p, TraceMethod::FiniteDifference);
      const double exact_gap = std::max({rel_gap(via_m1, via_m), rel_gap(via_m1, via_op),
                                         rel_gap(via_m, via_op)});
      const double fd_gap = rel_gap(via_fd, via_op);
      rec.add(json{{"check", "method_agreement"},
                   {"p", p},
                   {"function_spec", sf.spec},
                   {"m1_form", complex_record(via_m1)},
                   {"m_form", complex_record(via_m)},
                   {"operator_trace", complex_record(via_op)},
                   {"finite_difference", complex_record(via_fd)},
                   {"max_rel_err", exact_gap},
                   {"fd_rel_err", fd_gap},
                   {"tol", 1e-9},
                   {"fd_tol", 1e-5}},
              exact_gap <= 1e-9 && fd_gap <= 1e-5);

      // Spline-kernel trace identities on [a, b].
      const KernelTraceIdentity kti = kernel_trace_identity(f, d0, v, p, a, b);
      const double kti_gap =
          std::max(rel_gap(kti.lhs, kti.rhs_m1), rel_gap(kti.lhs, kti.rhs_m));
      rec.add(json{{"check", "kernel_identity"},
                   {"p", p},
                   {"function_spec", sf.spec},
                   {"lhs", complex_record(kti.lhs)},
                   {"rhs_m1", complex_record(kti.rhs_m1)},
                   {"rhs_m", complex_record(kti.rhs_m)},
                   {"max_rel_err", kti_gap},
                   {"tol", 1e-8}},
              kti_gap <= 1e-8);
    }
  }
}

}  // namespace

VerifySummary run_verify(const VerifyOptions& options, std::ostream& report) {
  if (options.p_max < 1) throw std::invalid_argument("p_max must be >= 1");

  struct PairTask {
    std::string label;
    HermitianOperator h0;
    HermitianOperator v;
  };
  std::vector<PairTask> tasks;
  if (!options.h0_path.empty() || !options.v_path.empty()) {
    if (options.h0_path.empty() || options.v_path.empty())
      throw std::invalid_argument("verify needs both --h0 and --v, or neither");
    tasks.push_back({"input", load_matrix(options.h0_path), load_matrix(options.v_path)});
  } else {
    Rng rng(options.seed);
    const int max_dim = std::max(2, options.max_dim);
    for (int i = 0; i < std::max(1, options.n_pairs); ++i) {
      const int n = 2 + (i % (max_dim - 1));
      char label[32];
      std::snprintf(label, sizeof(label), "pair%02d", i);
      HermitianOperator h0 = rng.hermitian(n, 1.0);
      HermitianOperator v = rng.perturbation(n, rng.uniform(0.3, 1.0));
      tasks.push_back({label, std::move(h0), std::move(v)});
    }
  }

  // Pairs evaluate in a worker pool; records are written in task order.
  std::vector<std::future<std::vector<Record>>> futures;
  futures.reserve(tasks.size());
  for (const PairTask& task : tasks) {
    futures.push_back(std::async(std::launch::async, [&task, &options]() {
      Recorder rec(task.label);
      check_pair(task.h0, task.v, options, rec);
      return rec.take();
    }));
  }

  VerifySummary summary;
  for (auto& future : futures) {
    for (const Record& record : future.get()) {
      report << record.line << "\n";
      ++summary.checks;
      if (!record.pass) {
        ++summary.failures;
        if (summary.first_failure.empty()) summary.first_failure = record.line;
      }
    }
  }
  report << json{{"summary", true}, {"checks", summary.checks}, {"failures", summary.failures}}
                .dump()
         << "\n";
  return summary;
}

}  // namespace specshift
