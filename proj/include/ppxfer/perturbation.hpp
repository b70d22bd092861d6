#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppxfer/chain_model.hpp"
#include "ppxfer/resonance.hpp"
#include "ppxfer/spectral.hpp"

namespace ppxfer {

/// Two or three perturbed levels collapsing onto one sender-block level as
/// J0 -> 0.
struct LevelCluster {
  int k = 0;                ///< sender mode, 1..n_s (k = 1 is the highest level)
  std::vector<int> levels;  ///< 0-based indices into the ascending spectrum
  double unperturbed = 0.0; ///< h + cos(k pi / (n_s + 1))
  int multiplicity = 2;     ///< 3 when a wire mode is resonant with k
  double splitting = 0.0;   ///< delta: half of (max - min) over the cluster
  int order = 2;            ///< perturbative order of delta: 1 resonant, 2 otherwise

  /// Frequency of the end-to-end Rabi oscillation carried by this cluster.
  /// A pair gives sin(delta t); a triple gives (1 - cos(delta t)) / 2, whose
  /// first maximum sits at pi / delta, i.e. half the frequency.
  double rabi_frequency() const { return multiplicity == 3 ? 0.5 * splitting : splitting; }
};

class ClusterAmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoTransferPredicted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nearest-level matching of perturbed eigenvalues to the uncoupled sender
/// levels. Throws ClusterAmbiguityError if two clusters claim one level,
/// which happens once J0 is too large for the perturbative picture.
std::vector<LevelCluster> find_clusters(const SpectralDecomposition& dec, const ChainSpec& spec);
std::vector<LevelCluster> find_clusters(const ChainSpec& spec);

struct SplittingFit {
  int k = 0;
  double exponent = 0.0;  ///< least-squares slope of log delta vs log J0
  int expected_order = 0;
};

/// Requires at least three J0 values inside (0, 0.1] spanning a decade.
std::vector<SplittingFit> splitting_scaling(const ChainSpec& spec, std::span<const double> j0_list);

struct RuleOfThumb {
  bool holds = false;
  int slow_k = 0;                ///< sender mode of the slow cluster (lower k of a mirror pair)
  double slow_frequency = 0.0;   ///< its Rabi frequency
  double ratio = 0.0;            ///< slowest / second-slowest distinct frequency (0 if only one)
};

/// Threshold separating "one frequency much smaller than the rest" from
/// "same order".
inline constexpr double kRuleOfThumbThreshold = 0.2;

/// Clusters k and n_s + 1 - k mirror each other about h and share one
/// frequency, so the uniqueness test runs over mirror pairs.
RuleOfThumb rule_of_thumb(std::span<const LevelCluster> clusters);

struct TransferTimePrediction {
  double tau = 0.0;          ///< pi / (2 Omega*)
  double tau_caption = 0.0;  ///< pi / Omega*, the alternative quoted for n_s = 4
  int slow_k = 0;
  double slow_frequency = 0.0;
};

/// Throws NoTransferPredicted when neither the rule of thumb holds nor the
/// chain is in a quasi-PP class.
TransferTimePrediction predict_transfer_time(const ChainSpec& spec);
TransferTimePrediction predict_transfer_time(const ChainSpec& spec,
                                             std::span<const LevelCluster> clusters);

/// pi / (2 * smallest delta): the time scale used to bound scans of
/// non-transferring chains.
double reference_time(std::span<const LevelCluster> clusters);

/// Tier-1 scan spacing resolving the fastest cluster splitting.
double coarse_scan_step(std::span<const LevelCluster> clusters);

struct RatioDiagnostic {
  std::string name;
  double value = 0.0;        ///< at J0 = 1e-3
  double cross_check = 0.0;  ///< at J0 = 1e-4
  double error() const { return std::abs(value - cross_check); }
};

/// n_s = 3: "(E6-E5)/(2E4)" = delta(k=1) / delta(k=2).
/// n_s = 4: "omega78/omega56" = delta(k=1) / delta(k=2).
/// Other block sizes have no named ratios.
std::vector<RatioDiagnostic> ratio_diagnostics(const ChainSpec& spec);

/// Analytic three-excitation envelope. For n_w = 4l + 1: sin^4(Omega t) with
/// Omega the slow pair splitting. Otherwise
/// [(sin(E4 t) + sin(D t))^2 sin(D t) / 4], E4 = delta(k=2), D = delta(k=1).
double envelope_3ex(const ChainSpec& spec, std::span<const LevelCluster> clusters, double t);
double envelope_3ex(const ChainSpec& spec, double t);

struct Rational {
  long long num = 0;
  long long den = 1;
};

/// Best continued-fraction approximation with denominator <= max_den.
Rational approximate_rational(double x, long long max_den = 100);

struct CommensurabilityVerdict {
  bool feasible = false;
  Rational ratio;
  std::string witness;
  /// Smallest (m, n) >= 0 solving ratio = (4m+1)/(4n+1), if any.
  std::optional<std::pair<long long, long long>> solution_1mod4;
  /// Smallest (m, n) >= 0 solving ratio = (4m+3)/(4n+3), if any.
  std::optional<std::pair<long long, long long>> solution_3mod4;
};

/// Whether sin(E4 t) and sin(D t) can reach +-1 together when
/// D / E4 = ratio, i.e. ratio = (4m+1)/(4n+1) or (4m+3)/(4n+3).
CommensurabilityVerdict commensurability_check(Rational ratio);

struct PerturbationReport {
  std::vector<LevelCluster> clusters;
  double slowest_splitting = 0.0;
  RuleOfThumb rule;
  Feasibility feasibility = Feasibility::unclassified;
  std::optional<TransferTimePrediction> prediction;
  double reference_time = 0.0;
  std::vector<RatioDiagnostic> ratios;
};

PerturbationReport perturbation_report(const ChainSpec& spec);

}  // namespace ppxfer
