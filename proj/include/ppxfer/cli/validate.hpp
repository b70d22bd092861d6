#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ppxfer::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OracleSuiteResult {
  double max_probability_deviation = 0.0;
  double max_occupation_deviation = 0.0;
  int cases = 0;
};

/// (N, n) in {(6,2), (7,2), (8,3)}, both statistics, J0 in {1, 0.1}, five
/// times in [0, 50]: determinant/permanent probabilities and amplitude
/// occupations against the Fock-space evolution.
OracleSuiteResult oracle_suite(int threads = 1);

/// n_res for p = 0..n_s, n_s = 1..4, as printed (n_s = 4 padded to five residues).
const std::vector<std::vector<int>>& resonance_table_reference();

struct ValidationOptions {
  std::optional<double> asymmetry;  ///< on-site shift applied to site 1 of the symmetry checks
  int threads = 1;
};

std::vector<CheckResult> run_validation(const ValidationOptions& opts);

}  // namespace ppxfer::cli
