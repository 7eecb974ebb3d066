// Exercises the shared-library surface strictly through specshift.h.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "specshift.h"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "specshift_capi_tests";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("function parse and eval") {
  specshift_function* fn = nullptr;
  REQUIRE(specshift_function_parse("poly:0,0,1", &fn) == SPECSHIFT_OK);
  double re = 0, im = 0;
  REQUIRE(specshift_function_eval(fn, 3.0, 0, &re, &im) == SPECSHIFT_OK);
  CHECK(re == 9.0);
  CHECK(im == 0.0);
  REQUIRE(specshift_function_eval(fn, 3.0, 1, &re, &im) == SPECSHIFT_OK);
  CHECK(re == 6.0);
  specshift_function_free(fn);

  specshift_function* bad = nullptr;
  CHECK(specshift_function_parse("nope:1", &bad) == SPECSHIFT_ERR_PARSE);
  CHECK(std::strlen(specshift_last_error()) > 0);
  CHECK(specshift_function_parse(nullptr, &bad) == SPECSHIFT_ERR_NULL);
}

TEST_CASE("divided differences through the api") {
  specshift_function* fn = nullptr;
  REQUIRE(specshift_function_parse("exp:1", &fn) == SPECSHIFT_OK);
  const double knots[] = {0.0, 0.0, 0.0};
  double re = 0, im = 0;
  REQUIRE(specshift_divided_difference(fn, knots, 3, -1.0, &re, &im) == SPECSHIFT_OK);
  CHECK(std::abs(re + 0.5) <= 1e-14);
  CHECK(std::abs(im) <= 1e-14);
  CHECK(specshift_divided_difference(fn, knots, 0, -1.0, &re, &im) == SPECSHIFT_ERR_INVALID);
  specshift_function_free(fn);
}

TEST_CASE("matrix creation and hermitian validation") {
  const double re[] = {0.0, 1.0, 1.0, 0.0};
  specshift_matrix* v = nullptr;
  REQUIRE(specshift_matrix_create(2, re, nullptr, &v) == SPECSHIFT_OK);
  int n = 0;
  specshift_matrix_dim(v, &n);
  CHECK(n == 2);
  double a = 0, b = 0;
  REQUIRE(specshift_matrix_get(v, 0, 1, &a, &b) == SPECSHIFT_OK);
  CHECK(a == 1.0);
  CHECK(specshift_matrix_get(v, 2, 0, &a, &b) == SPECSHIFT_ERR_INVALID);

  const double skew[] = {0.0, 1.0, 0.0, 0.0};
  specshift_matrix* bad = nullptr;
  CHECK(specshift_matrix_create(2, skew, nullptr, &bad) == SPECSHIFT_ERR_HERMITICITY);

  const fs::path path = temp_dir() / "v.json";
  REQUIRE(specshift_matrix_save(v, path.string().c_str()) == SPECSHIFT_OK);
  specshift_matrix* back = nullptr;
  REQUIRE(specshift_matrix_load(path.string().c_str(), &back) == SPECSHIFT_OK);
  REQUIRE(specshift_matrix_get(back, 1, 0, &a, &b) == SPECSHIFT_OK);
  CHECK(a == 1.0);
  specshift_matrix_free(back);
  specshift_matrix_free(v);

  specshift_matrix* missing = nullptr;
  CHECK(specshift_matrix_load((temp_dir() / "missing.json").string().c_str(), &missing) ==
        SPECSHIFT_ERR_PARSE);
}

TEST_CASE("density computation, files, and round trip") {
  const double h0_entries[] = {0.0};
  const double v_entries[] = {1.0};
  specshift_matrix* h0 = nullptr;
  specshift_matrix* v = nullptr;
  REQUIRE(specshift_matrix_create(1, h0_entries, nullptr, &h0) == SPECSHIFT_OK);
  REQUIRE(specshift_matrix_create(1, v_entries, nullptr, &v) == SPECSHIFT_OK);

  specshift_density* density = nullptr;
  REQUIRE(specshift_ssf_compute(h0, v, 3, SPECSHIFT_VARIANT_NUP1, -1.0, &density) ==
          SPECSHIFT_OK);

  int order = 0;
  specshift_density_order(density, &order);
  CHECK(order == 3);
  double lo = 0, hi = 0;
  specshift_density_hull(density, &lo, &hi);
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));
  double mass_re = 0, mass_im = 0;
  specshift_density_mass(density, &mass_re, &mass_im);
  CHECK(mass_re == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // The 1x1 closed form (1 - t)^2 / 2 on (0, 1).
  double re = 0, im = 0;
  REQUIRE(specshift_density_eval(density, 0.5, &re, &im) == SPECSHIFT_OK);
  CHECK(std::abs(re - 0.125) <= 1e-12);

  const fs::path dpath = temp_dir() / "density.json";
  REQUIRE(specshift_density_save(density, dpath.string().c_str()) == SPECSHIFT_OK);
  specshift_density* loaded = nullptr;
  REQUIRE(specshift_density_load(dpath.string().c_str(), &loaded) == SPECSHIFT_OK);
  for (double t : {-0.5, 0.1, 0.5, 0.9, 1.5}) {
    double re2 = 0, im2 = 0;
    specshift_density_eval(density, t, &re, &im);
    specshift_density_eval(loaded, t, &re2, &im2);
    CHECK(std::abs(re - re2) <= 1e-12);
    CHECK(std::abs(im - im2) <= 1e-12);
  }
  specshift_density_free(loaded);

  const fs::path cpath = temp_dir() / "density.csv";
  REQUIRE(specshift_density_write_csv(density, -0.5, 1.5, 21, cpath.string().c_str()) ==
          SPECSHIFT_OK);
  std::ifstream csv(cpath);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,eta_re,eta_im");

  specshift_density_free(density);
  specshift_matrix_free(h0);
  specshift_matrix_free(v);
}

TEST_CASE("trace formula check through the api") {
  const double h0_entries[] = {0.0, 0.0, 0.0, 1.0};
  const double v_entries[] = {0.0, 0.5, 0.5, 0.0};
  specshift_matrix* h0 = nullptr;
  specshift_matrix* v = nullptr;
  REQUIRE(specshift_matrix_create(2, h0_entries, nullptr, &h0) == SPECSHIFT_OK);
  REQUIRE(specshift_matrix_create(2, v_entries, nullptr, &v) == SPECSHIFT_OK);
  specshift_function* f = nullptr;
  REQUIRE(specshift_function_parse("gauss:0,1", &f) == SPECSHIFT_OK);

  specshift_trace_check check{};
  REQUIRE(specshift_trace_formula_check(h0, v, 2, f, SPECSHIFT_VARIANT_NUP2, -1.0, &check) ==
          SPECSHIFT_OK);
  CHECK(check.rel_err <= 1e-6);
  CHECK(check.abs_err == doctest::Approx(std::abs(std::complex<double>(
                             check.trace_re - check.integral_re,
                             check.trace_im - check.integral_im))));

  specshift_function_free(f);
  specshift_matrix_free(h0);
  specshift_matrix_free(v);
}

TEST_CASE("verify run and report summary") {
  const fs::path report = temp_dir() / "report.jsonl";
  specshift_verify_options options{};
  options.p_max = 2;
  options.seed = 5;
  options.n_pairs = 1;
  options.max_dim = 3;
  options.cluster_tol = -1.0;

  int checks = 0, failures = 0;
  REQUIRE(specshift_verify_run(&options, report.string().c_str(), &checks, &failures) ==
          SPECSHIFT_OK);
  CHECK(checks > 0);
  CHECK(failures == 0);

  char buffer[1024];
  int counted = -1;
  REQUIRE(specshift_report_summary(report.string().c_str(), buffer, sizeof(buffer),
                                   &counted) == SPECSHIFT_OK);
  CHECK(counted == 0);
  CHECK(std::string(buffer).find("failures: 0") != std::string::npos);

  // Negative control: corrupted densities must fail.
  options.corrupt_density = 1;
  REQUIRE(specshift_verify_run(&options, report.string().c_str(), &checks, &failures) ==
          SPECSHIFT_OK);
  CHECK(failures > 0);

  CHECK(specshift_verify_run(nullptr, nullptr, &checks, &failures) == SPECSHIFT_ERR_NULL);

  write_text(temp_dir() / "broken.jsonl", "not json\n");
  CHECK(specshift_report_summary((temp_dir() / "broken.jsonl").string().c_str(), buffer,
                                 sizeof(buffer), &counted) == SPECSHIFT_ERR_PARSE);
}

TEST_CASE("version string") { CHECK(std::strlen(specshift_version()) > 0); }
