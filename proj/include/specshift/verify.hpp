#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace specshift {

struct VerifyOptions {
  std::string h0_path;  // both empty -> seeded random pairs
  std::string v_path;
  int p_max = 4;
  std::uint64_t seed = 1;
  int n_pairs = 6;
  int max_dim = 6;
  double cluster_tol = -1.0;
  bool corrupt_density = false;  // negative control: perturbs every density
};

struct VerifySummary {
  int checks = 0;
  int failures = 0;
  std::string first_failure;  // rendered record of the first failing check
};

/// Runs the full property suite (trace formulas, method agreement, variant
/// agreement, measure and density facts) on the given pair or on seeded
/// random pairs, streaming one JSON record per line. Pair workloads run in a
/// worker pool; the report is written in a fixed order, so identical options
/// produce byte-identical reports.
VerifySummary run_verify(const VerifyOptions& options, std::ostream& report);

}  // namespace specshift
