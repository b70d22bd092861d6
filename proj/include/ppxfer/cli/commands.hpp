#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppxfer/amplitudes.hpp"
#include "ppxfer/cli/config.hpp"
#include "ppxfer/perturbation.hpp"
#include "ppxfer/resonance.hpp"

namespace ppxfer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Shortest round-trip decimal form; identical across runs and thread counts.
std::string format_number(double x);

/// Peak search bounds and results for one chain.
struct TransferAnalysis {
  Feasibility feasibility = Feasibility::unclassified;
  std::optional<TransferTimePrediction> prediction;
  double reference_time = 0.0;  ///< pi / (2 min delta)
  double coarse_step = 0.0;
  double t_max = 0.0;
  Peak fermion;
  Peak boson;  ///< windowed around the fermion peak
};

/// t_max <= 0 picks 1.5 tau when a transfer is predicted and 10 reference
/// times otherwise.
TransferAnalysis analyze_transfer(const ChainSpec& spec, double t_max, int threads,
                                  bool with_boson = true);

struct ScalingRow {
  int n_s = 0;
  int n_w = 0;
  double tau_exact = 0.0;
  double tau_predicted = 0.0;
  double peak = 0.0;
};

std::vector<int> scaling_lengths(int l_min, int l_max, int family);
std::vector<ScalingRow> scaling_sweep(int n_s, std::span<const int> lengths, double j0, int threads);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_transfer(const RunConfig& cfg, std::ostream& out);
int cmd_resonance(const RunConfig& cfg, std::ostream& out);
int cmd_perturbation(const RunConfig& cfg, std::ostream& out);
int cmd_battery(const RunConfig& cfg, std::ostream& out);
int cmd_scaling(const RunConfig& cfg, std::ostream& out);
int cmd_oracle_check(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

/// Dispatch by cfg.subcommand. Output goes to cfg.output when set.
int run(const RunConfig& cfg, std::ostream& out);

}  // namespace ppxfer::cli
