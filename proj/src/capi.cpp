#include "specshift.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "specshift/errors.hpp"
#include "specshift/io.hpp"
#include "specshift/ssf.hpp"
#include "specshift/verify.hpp"

using namespace specshift;

struct specshift_function {
  SmoothFunction fn;
};
struct specshift_matrix {
  HermitianOperator m;
};
struct specshift_density {
  SsfResult result;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
int guarded(Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return fail(SPECSHIFT_ERR_PARSE, e.what());
  } catch (const HermiticityError& e) {
    return fail(SPECSHIFT_ERR_HERMITICITY, e.what());
  } catch (const EnvelopeError& e) {
    return fail(SPECSHIFT_ERR_ENVELOPE, e.what());
  } catch (const EvalError& e) {
    return fail(SPECSHIFT_ERR_EVAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SPECSHIFT_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(SPECSHIFT_ERR_EVAL, e.what());
  }
}

SsfVariant to_variant(int variant) {
  if (variant == SPECSHIFT_VARIANT_NUP1) return SsfVariant::Nup1;
  if (variant == SPECSHIFT_VARIANT_NUP2) return SsfVariant::Nup2;
  throw std::invalid_argument("variant must be 1 (nup1) or 2 (nup2)");
}

}  // namespace

extern "C" {

const char* specshift_version(void) { return "0.1.0"; }

const char* specshift_last_error(void) { return g_last_error.c_str(); }

int specshift_function_parse(const char* spec, specshift_function** out) {
  if (!spec || !out) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    *out = new specshift_function{parse_function_spec(spec)};
    return SPECSHIFT_OK;
  });
}

void specshift_function_free(specshift_function* fn) { delete fn; }

int specshift_function_eval(const specshift_function* fn, double t, int order, double* re,
                            double* im) {
  if (!fn || !re || !im) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    const Complex v = fn->fn.eval_derivative(t, order);
    *re = v.real();
    *im = v.imag();
    return SPECSHIFT_OK;
  });
}

int specshift_matrix_load(const char* path, specshift_matrix** out) {
  if (!path || !out) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    *out = new specshift_matrix{load_matrix(path)};
    return SPECSHIFT_OK;
  });
}

int specshift_matrix_create(int n, const double* re, const double* im,
                            specshift_matrix** out) {
  if (!re || !out) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) = Complex(re[r * n + c], im ? im[r * n + c] : 0.0);
    *out = new specshift_matrix{HermitianOperator(std::move(m))};
    return SPECSHIFT_OK;
  });
}

int specshift_matrix_save(const specshift_matrix* m, const char* path) {
  if (!m || !path) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    save_matrix(m->m, path);
    return SPECSHIFT_OK;
  });
}

int specshift_matrix_dim(const specshift_matrix* m, int* n) {
  if (!m || !n) return fail(SPECSHIFT_ERR_NULL, "null argument");
  *n = m->m.dim();
  return SPECSHIFT_OK;
}

int specshift_matrix_get(const specshift_matrix* m, int row, int col, double* re, double* im) {
  if (!m || !re || !im) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    if (row < 0 || col < 0 || row >= m->m.dim() || col >= m->m.dim())
      throw std::invalid_argument("matrix index out of range");
    const Complex v = m->m.matrix()(row, col);
    *re = v.real();
    *im = v.imag();
    return SPECSHIFT_OK;
  });
}

void specshift_matrix_free(specshift_matrix* m) { delete m; }

int specshift_divided_difference(const specshift_function* fn, const double* knots,
                                 int n_knots, double cluster_tol, double* re, double* im) {
  if (!fn || !knots || !re || !im) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    if (n_knots < 1) throw std::invalid_argument("at least one knot is required");
    const KnotMultiset km(std::vector<double>(knots, knots + n_knots), cluster_tol);
    const Complex v = divided_difference(fn->fn, km);
    *re = v.real();
    *im = v.imag();
    return SPECSHIFT_OK;
  });
}

int specshift_ssf_compute(const specshift_matrix* h0, const specshift_matrix* v, int order,
                          int variant, double cluster_tol, specshift_density** out) {
  if (!h0 || !v || !out) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    *out = new specshift_density{ssf_density(h0->m, v->m, order, to_variant(variant),
                                             cluster_tol)};
    return SPECSHIFT_OK;
  });
}

int specshift_density_order(const specshift_density* d, int* order) {
  if (!d || !order) return fail(SPECSHIFT_ERR_NULL, "null argument");
  *order = d->result.order;
  return SPECSHIFT_OK;
}

int specshift_density_eval(const specshift_density* d, double t, double* re, double* im) {
  if (!d || !re || !im) return fail(SPECSHIFT_ERR_NULL, "null argument");
  const Complex v = d->result.density(t);
  *re = v.real();
  *im = v.imag();
  return SPECSHIFT_OK;
}

int specshift_density_mass(const specshift_density* d, double* re, double* im) {
  if (!d || !re || !im) return fail(SPECSHIFT_ERR_NULL, "null argument");
  *re = d->result.mass.real();
  *im = d->result.mass.imag();
  return SPECSHIFT_OK;
}

int specshift_density_hull(const specshift_density* d, double* lo, double* hi) {
  if (!d || !lo || !hi) return fail(SPECSHIFT_ERR_NULL, "null argument");
  *lo = d->result.hull_min;
  *hi = d->result.hull_max;
  return SPECSHIFT_OK;
}

int specshift_density_save(const specshift_density* d, const char* path) {
  if (!d || !path) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    save_pp(d->result.density, path);
    return SPECSHIFT_OK;
  });
}

int specshift_density_load(const char* path, specshift_density** out) {
  if (!path || !out) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    SsfResult result;
    result.density = load_pp(path);
    result.order = 0;  // not recorded in the serialized form
    if (!result.density.breakpoints().empty()) {
      result.hull_min = result.density.breakpoints().front();
      result.hull_max = result.density.breakpoints().back();
    }
    result.mass = pp_integral(result.density);
    *out = new specshift_density{std::move(result)};
    return SPECSHIFT_OK;
  });
}

int specshift_density_write_csv(const specshift_density* d, double a, double b, int m,
                                const char* path) {
  if (!d || !path) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    std::ostringstream csv;
    write_density_csv(d->result.density, a, b, m, csv);
    write_file_atomic(path, csv.str());
    return SPECSHIFT_OK;
  });
}

void specshift_density_free(specshift_density* d) { delete d; }

int specshift_trace_formula_check(const specshift_matrix* h0, const specshift_matrix* v,
                                  int order, const specshift_function* f, int variant,
                                  double cluster_tol, specshift_trace_check* out) {
  if (!h0 || !v || !f || !out) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    const TraceFormulaCheck check =
        trace_formula_check(h0->m, v->m, order, f->fn, to_variant(variant), cluster_tol);
    out->trace_re = check.trace_side.real();
    out->trace_im = check.trace_side.imag();
    out->integral_re = check.integral_side.real();
    out->integral_im = check.integral_side.imag();
    out->abs_err = check.abs_err;
    out->rel_err = check.rel_err;
    return SPECSHIFT_OK;
  });
}

int specshift_verify_run(const specshift_verify_options* options, const char* report_path,
                         int* n_checks, int* n_failures) {
  if (!options) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    VerifyOptions opts;
    if (options->h0_path) opts.h0_path = options->h0_path;
    if (options->v_path) opts.v_path = options->v_path;
    opts.p_max = options->p_max > 0 ? options->p_max : 4;
    opts.seed = options->seed;
    opts.n_pairs = options->n_pairs > 0 ? options->n_pairs : 6;
    opts.max_dim = options->max_dim > 0 ? options->max_dim : 6;
    opts.cluster_tol = options->cluster_tol;
    opts.corrupt_density = options->corrupt_density != 0;

    VerifySummary summary;
    if (report_path) {
      std::ostringstream report;
      summary = run_verify(opts, report);
      write_file_atomic(report_path, report.str());
    } else {
      summary = run_verify(opts, std::cout);
    }
    if (n_checks) *n_checks = summary.checks;
    if (n_failures) *n_failures = summary.failures;
    if (summary.failures > 0) g_last_error = summary.first_failure;
    return SPECSHIFT_OK;
  });
}

int specshift_report_summary(const char* report_path, char* buffer, int buffer_len,
                             int* n_failures) {
  if (!report_path || !buffer || buffer_len < 1) return fail(SPECSHIFT_ERR_NULL, "null argument");
  return guarded([&] {
    std::ifstream in(report_path);
    if (!in) throw ParseError(std::string("cannot open report: ") + report_path);
    int checks = 0, failures = 0;
    std::map<std::string, int> by_check;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed report line: ") + e.what());
      }
      if (record.contains("summary")) continue;
      ++checks;
      if (record.contains("pass") && !record["pass"].get<bool>()) {
        ++failures;
        if (record.contains("check")) ++by_check[record["check"].get<std::string>()];
      }
    }
    std::ostringstream out;
    out << "checks: " << checks << "\nfailures: " << failures << "\n";
    for (const auto& [name, count] : by_check)
      out << "  " << name << ": " << count << " failing\n";
    const std::string text = out.str();
    std::strncpy(buffer, text.c_str(), buffer_len - 1);
    buffer[buffer_len - 1] = '\0';
    if (n_failures) *n_failures = failures;
    return SPECSHIFT_OK;
  });
}

}  // extern "C"
