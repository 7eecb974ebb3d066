// Drives the installed CLI binary and checks its contract: output formats,
// exit codes, determinism, and file handling.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "specshift/io.hpp"
#include "specshift/random.hpp"

using namespace specshift;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "specshift_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path out = temp_dir() / "stdout.txt";
  const fs::path err = temp_dir() / "stderr.txt";
  const std::string command = std::string(SPECSHIFT_CLI_PATH) + " " + args + " > " +
                              out.string() + " 2> " + err.string();
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

}  // namespace

TEST_CASE("dd prints the difference with 15 significant digits") {
  const RunResult quotient = run_cli("dd --f poly:0,0,1 --knots 1,3");
  CHECK(quotient.exit_code == 0);
  CHECK(quotient.out == "4 0\n");

  const RunResult confluent = run_cli("dd --f exp:1 --knots 0,0,0");
  CHECK(confluent.exit_code == 0);
  CHECK(confluent.out == "-0.5 0\n");

  const RunResult leading = run_cli("dd --f poly:-5,0,2,1 --knots 0,1,2,7");
  CHECK(leading.exit_code == 0);
  CHECK(leading.out == "1 0\n");
}

TEST_CASE("dd exit codes") {
  CHECK(run_cli("dd --f nope:1 --knots 0,1").exit_code == 2);
  CHECK(run_cli("dd --f rat:1 --knots 0,1").exit_code == 2);  // real pole
  CHECK(run_cli("dd --f poly:1 --knots 0,,1").exit_code == 2);
  CHECK(run_cli("dd --f poly:1").exit_code == 2);  // missing --knots
  // Derivative order exceeding a cap is an evaluation failure, but caps only
  // exist below the CLI; the parse layer rejects first. Unknown flag -> 2.
  CHECK(run_cli("dd --f poly:1 --knots 0 --bogus").exit_code == 2);
}

TEST_CASE("compute-ssf writes grid csv and serialized density") {
  const fs::path dir = temp_dir();
  save_matrix(HermitianOperator(Matrix::Zero(1, 1)), (dir / "h0.json").string());
  Matrix vm(1, 1);
  vm << 1.0;
  save_matrix(HermitianOperator(vm), (dir / "v.json").string());

  const std::string prefix = (dir / "eta").string();
  const RunResult run = run_cli("compute-ssf --h0 " + (dir / "h0.json").string() + " --v " +
                                (dir / "v.json").string() + " --p 3 --grid -0.5:1.5:9 --out " +
                                prefix);
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("mass = 0.166666666666667") != std::string::npos);
  CHECK(run.out.find("hull = [0, 1]") != std::string::npos);

  const std::string csv = slurp(prefix + ".csv");
  CHECK(csv.rfind("t,eta_re,eta_im\n", 0) == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 10);

  // The serialized density reproduces the scalar closed form (1-t)^2/2.
  const PiecewisePolynomial density = load_pp(prefix + ".json");
  CHECK(std::abs(density(0.25) - Complex(0.28125)) <= 1e-12);

  // V = 0 gives an all-zero density.
  save_matrix(HermitianOperator::zero(1), (dir / "zero.json").string());
  const RunResult zero_run =
      run_cli("compute-ssf --h0 " + (dir / "h0.json").string() + " --v " +
              (dir / "zero.json").string() + " --p 2 --grid -1:1:5 --out " +
              (dir / "zero_eta").string());
  CHECK(zero_run.exit_code == 0);
  CHECK(zero_run.out.find("mass = 0 0") != std::string::npos);

  // 2x2 pair at p = 2: the printed mass is Tr(V^2)/2.
  Matrix h2 = Matrix::Zero(2, 2);
  h2(1, 1) = 1.0;
  Matrix v2(2, 2);
  v2 << 0.0, 0.5, 0.5, 0.0;  // Tr V^2 = 1/2
  save_matrix(HermitianOperator(h2), (dir / "h2.json").string());
  save_matrix(HermitianOperator(v2), (dir / "v2.json").string());
  const RunResult pair_run = run_cli("compute-ssf --h0 " + (dir / "h2.json").string() +
                                     " --v " + (dir / "v2.json").string() +
                                     " --p 2 --out " + (dir / "eta2").string());
  CHECK(pair_run.exit_code == 0);
  const size_t mass_at = pair_run.out.find("mass = ");
  REQUIRE(mass_at != std::string::npos);
  double mass_re = 0.0, mass_im = 0.0;
  REQUIRE(std::sscanf(pair_run.out.c_str() + mass_at, "mass = %lf %lf", &mass_re,
                      &mass_im) == 2);
  CHECK(std::abs(mass_re - 0.25) <= 1e-9);
  CHECK(std::abs(mass_im) <= 1e-9);
}

TEST_CASE("compute-ssf exit codes") {
  const fs::path dir = temp_dir();

  // Hermitianity violations are load errors.
  std::ofstream(dir / "skew.json")
      << R"({"n": 2, "re": [[0.0, 1.0], [0.0, 0.0]]})";
  save_matrix(HermitianOperator::identity(2), (dir / "id2.json").string());
  CHECK(run_cli("compute-ssf --h0 " + (dir / "skew.json").string() + " --v " +
                (dir / "id2.json").string() + " --p 2 --out " + (dir / "x").string())
            .exit_code == 2);

  // Envelope: 24 distinct eigenvalues at order 6 exceed 1e7 tuples.
  Rng rng(81);
  save_matrix(rng.hermitian(24, 1.0), (dir / "big_h0.json").string());
  save_matrix(rng.perturbation(24, 1.0), (dir / "big_v.json").string());
  CHECK(run_cli("compute-ssf --h0 " + (dir / "big_h0.json").string() + " --v " +
                (dir / "big_v.json").string() + " --p 7 --out " + (dir / "y").string())
            .exit_code == 4);

  // No partial outputs on failure paths.
  CHECK(!fs::exists(dir / "x.csv"));
  CHECK(!fs::exists(dir / "x.json"));
  CHECK(!fs::exists(dir / "y.csv"));

  CHECK(run_cli("compute-ssf --h0 missing.json --v missing.json --p 1 --out z").exit_code ==
        2);
}

TEST_CASE("verify determinism and negative control") {
  const fs::path dir = temp_dir();
  const std::string base =
      "verify --seed 7 --pairs 1 --max-dim 3 --p 2 --out ";

  const RunResult first = run_cli(base + (dir / "report_a.jsonl").string());
  CHECK(first.exit_code == 0);
  const RunResult second = run_cli(base + (dir / "report_b.jsonl").string());
  CHECK(second.exit_code == 0);
  CHECK(slurp(dir / "report_a.jsonl") == slurp(dir / "report_b.jsonl"));
  CHECK(!slurp(dir / "report_a.jsonl").empty());

  const RunResult corrupted =
      run_cli(base + (dir / "report_c.jsonl").string() + " --corrupt-eta");
  CHECK(corrupted.exit_code == 1);
  CHECK(corrupted.err.find("first failing record") != std::string::npos);

  const RunResult summary = run_cli("report --in " + (dir / "report_a.jsonl").string());
  CHECK(summary.exit_code == 0);
  CHECK(summary.out.find("failures: 0") != std::string::npos);
  const RunResult failing_summary =
      run_cli("report --in " + (dir / "report_c.jsonl").string());
  CHECK(failing_summary.exit_code == 1);
}

TEST_CASE("verify accepts an explicit pair") {
  const fs::path dir = temp_dir();
  save_matrix(HermitianOperator(Matrix::Zero(1, 1)), (dir / "vh0.json").string());
  Matrix vm(1, 1);
  vm << 0.7;
  save_matrix(HermitianOperator(vm), (dir / "vv.json").string());
  const RunResult run = run_cli("verify --h0 " + (dir / "vh0.json").string() + " --v " +
                                (dir / "vv.json").string() + " --p 3 --out " +
                                (dir / "pair_report.jsonl").string());
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("0 failures") != std::string::npos);
}
