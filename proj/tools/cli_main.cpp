// Command-line front end for the specshift shared library. Everything goes
// through the C API in specshift.h.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specshift.h"

namespace {

// Spec'd exit codes: 2 for parse/validation failures, 3 for evaluation
// failures, 4 for envelope violations; verify exits 1 on failed checks.
int exit_code_for(int status) {
  switch (status) {
    case SPECSHIFT_OK:
      return 0;
    case SPECSHIFT_ERR_PARSE:
    case SPECSHIFT_ERR_INVALID:
    case SPECSHIFT_ERR_HERMITICITY:
      return 2;
    case SPECSHIFT_ERR_ENVELOPE:
      return 4;
    default:
      return 3;
  }
}

[[noreturn]] void die(int status) {
  std::fprintf(stderr, "error: %s\n", specshift_last_error());
  std::exit(exit_code_for(status));
}

std::vector<double> parse_knot_list(const std::string& text) {
  std::vector<double> knots;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    char* end = nullptr;
    const double value = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      std::fprintf(stderr, "error: bad knot value '%s'\n", item.c_str());
      std::exit(2);
    }
    knots.push_back(value);
    pos = comma + 1;
  }
  return knots;
}

struct Grid {
  double a = 0.0, b = 0.0;
  int m = 0;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.a, &g.b, &g.m, &trailing) != 3 ||
      g.m < 2 || !(g.a < g.b)) {
    std::fprintf(stderr, "error: bad grid spec '%s' (want a:b:m with a < b, m >= 2)\n",
                 text.c_str());
    std::exit(2);
  }
  return g;
}

int variant_code(const std::string& name) {
  if (name == "nup1") return SPECSHIFT_VARIANT_NUP1;
  if (name == "nup2") return SPECSHIFT_VARIANT_NUP2;
  std::fprintf(stderr, "error: unknown variant '%s'\n", name.c_str());
  std::exit(2);
}

int cmd_dd(const std::string& fspec, const std::string& knot_text, double cluster_tol) {
  specshift_function* fn = nullptr;
  int status = specshift_function_parse(fspec.c_str(), &fn);
  if (status != SPECSHIFT_OK) die(status);
  const std::vector<double> knots = parse_knot_list(knot_text);
  double re = 0.0, im = 0.0;
  status = specshift_divided_difference(fn, knots.data(), int(knots.size()), cluster_tol,
                                        &re, &im);
  specshift_function_free(fn);
  if (status == SPECSHIFT_ERR_INVALID || status == SPECSHIFT_ERR_PARSE) die(status);
  if (status != SPECSHIFT_OK) {
    std::fprintf(stderr, "error: %s\n", specshift_last_error());
    return 3;
  }
  std::printf("%.15g %.15g\n", re, im);
  return 0;
}

int cmd_compute_ssf(const std::string& h0_path, const std::string& v_path, int p,
                    const std::string& variant, const std::string& grid_text,
                    double cluster_tol, const std::string& out_prefix) {
  specshift_matrix* h0 = nullptr;
  specshift_matrix* v = nullptr;
  int status = specshift_matrix_load(h0_path.c_str(), &h0);
  if (status != SPECSHIFT_OK) die(status);
  status = specshift_matrix_load(v_path.c_str(), &v);
  if (status != SPECSHIFT_OK) die(status);

  specshift_density* density = nullptr;
  status = specshift_ssf_compute(h0, v, p, variant_code(variant), cluster_tol, &density);
  specshift_matrix_free(h0);
  specshift_matrix_free(v);
  if (status != SPECSHIFT_OK) die(status);

  double lo = 0.0, hi = 0.0, mass_re = 0.0, mass_im = 0.0;
  specshift_density_hull(density, &lo, &hi);
  specshift_density_mass(density, &mass_re, &mass_im);

  Grid grid;
  if (!grid_text.empty()) {
    grid = parse_grid(grid_text);
  } else {
    const double pad = 0.05 * (hi - lo + 1.0);
    grid = {lo - pad, hi + pad, 501};
  }

  status = specshift_density_write_csv(density, grid.a, grid.b, grid.m,
                                       (out_prefix + ".csv").c_str());
  if (status != SPECSHIFT_OK) {
    specshift_density_free(density);
    die(status);
  }
  status = specshift_density_save(density, (out_prefix + ".json").c_str());
  if (status != SPECSHIFT_OK) {
    specshift_density_free(density);
    die(status);
  }
  specshift_density_free(density);

  std::printf("p = %d\n", p);
  std::printf("mass = %.15g %.15g\n", mass_re, mass_im);
  std::printf("hull = [%.15g, %.15g]\n", lo, hi);
  std::printf("wrote %s.csv and %s.json\n", out_prefix.c_str(), out_prefix.c_str());
  return 0;
}

int cmd_verify(const std::string& h0_path, const std::string& v_path, int p_max,
               unsigned long long seed, int n_pairs, int max_dim, double cluster_tol,
               const std::string& out_path, bool corrupt) {
  specshift_verify_options options{};
  options.h0_path = h0_path.empty() ? nullptr : h0_path.c_str();
  options.v_path = v_path.empty() ? nullptr : v_path.c_str();
  options.p_max = p_max;
  options.seed = seed;
  options.n_pairs = n_pairs;
  options.max_dim = max_dim;
  options.cluster_tol = cluster_tol;
  options.corrupt_density = corrupt ? 1 : 0;

  int checks = 0, failures = 0;
  const int status = specshift_verify_run(&options, out_path.empty() ? nullptr : out_path.c_str(),
                                          &checks, &failures);
  if (status != SPECSHIFT_OK) die(status);

  // Keep a stdout report stream clean; the summary goes to stderr then.
  FILE* summary = out_path.empty() ? stderr : stdout;
  std::fprintf(summary, "verify: %d checks, %d failures\n", checks, failures);
  if (failures > 0) {
    std::fprintf(stderr, "first failing record: %s\n", specshift_last_error());
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& in_path) {
  char buffer[4096];
  int failures = 0;
  const int status = specshift_report_summary(in_path.c_str(), buffer, sizeof(buffer),
                                              &failures);
  if (status != SPECSHIFT_OK) die(status);
  std::fputs(buffer, stdout);
  return failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specshift: higher-order spectral shift laboratory"};
  app.require_subcommand(1);

  std::string fspec, knot_text, h0_path, v_path, variant = "nup1", grid_text, out_path,
              in_path;
  double cluster_tol = -1.0;
  int p = 1, p_max = 4, n_pairs = 6, max_dim = 6;
  unsigned long long seed = 1;
  bool corrupt = false;

  auto* dd = app.add_subcommand("dd", "evaluate a divided difference");
  dd->add_option("--f", fspec, "function spec")->required();
  dd->add_option("--knots", knot_text, "comma-separated knot list")->required();
  dd->add_option("--cluster-tol", cluster_tol, "knot clustering tolerance");

  auto* ssf = app.add_subcommand("compute-ssf", "compute a spectral shift density");
  ssf->add_option("--h0", h0_path, "matrix file for H0")->required();
  ssf->add_option("--v", v_path, "matrix file for V")->required();
  ssf->add_option("--p", p, "density order")->required();
  ssf->add_option("--variant", variant, "density construction route (nup1|nup2)");
  ssf->add_option("--grid", grid_text, "CSV grid a:b:m (default: padded hull, 501 points)");
  ssf->add_option("--cluster-tol", cluster_tol, "eigenvalue clustering tolerance");
  ssf->add_option("--out", out_path, "output prefix (<out>.csv and <out>.json)")->required();

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--h0", h0_path, "matrix file for H0 (with --v; default: random pairs)");
  verify->add_option("--v", v_path, "matrix file for V");
  verify->add_option("--p", p_max, "largest order to check");
  verify->add_option("--seed", seed, "seed for the random pair stream");
  verify->add_option("--pairs", n_pairs, "number of random pairs");
  verify->add_option("--max-dim", max_dim, "largest random matrix dimension");
  verify->add_option("--cluster-tol", cluster_tol, "eigenvalue clustering tolerance");
  verify->add_option("--out", out_path, "report file (default: stdout)");
  verify->add_flag("--corrupt-eta", corrupt, "debug: perturb densities (negative control)")
      ->group("");

  auto* report = app.add_subcommand("report", "summarize a verification report");
  report->add_option("--in", in_path, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (dd->parsed()) return cmd_dd(fspec, knot_text, cluster_tol);
  if (ssf->parsed()) return cmd_compute_ssf(h0_path, v_path, p, variant, grid_text,
                                            cluster_tol, out_path);
  if (verify->parsed())
    return cmd_verify(h0_path, v_path, p_max, seed, n_pairs, max_dim, cluster_tol, out_path,
                      corrupt);
  if (report->parsed()) return cmd_report(in_path);
  return 2;
}
