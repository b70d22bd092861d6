#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppxfer/amplitudes.hpp"
#include "ppxfer/chain_model.hpp"
#include "ppxfer/spectral.hpp"

namespace ppxfer {

// One-body observables for the product initial state with the first n_s
// sites filled. By Wick's theorem <c+_i c_j>(t) = sum_s conj(f_s^i) f_s^j over
// senders s, for bosons and fermions alike.

/// Shifts the on-site energy of one site (1-based). Breaks mirror symmetry
/// and the sublattice symmetry that keeps bond currents purely imaginary.
struct AsymmetryHook {
  int site = 1;
  double shift = 0.0;
};

class ChainDynamics {
 public:
  explicit ChainDynamics(const ChainSpec& spec, std::optional<AsymmetryHook> hook = std::nullopt);

  const ChainSpec& spec() const { return spec_; }
  const CouplingProfile& profile() const { return profile_; }
  const SpectralDecomposition& spectrum() const { return dec_; }
  int sites() const { return profile_.sites(); }

  /// n_s x N, row s holds f_s^j(t) for every site j.
  Eigen::MatrixXcd sender_rows(double t) const;

  /// <c+_i c_j>(t), 0-based sites.
  cplx correlation(const Eigen::MatrixXcd& rows, int i, int j) const;

 private:
  ChainSpec spec_;
  CouplingProfile profile_;
  SpectralDecomposition dec_;
};

/// <n_site(t)>, site 1-based.
double occupation(const ChainSpec& spec, double t, int site);
std::vector<double> occupations(const ChainDynamics& dyn, double t);

/// ||F_s^r(t)||_F^2 - n_r / 2: receiver-block S^z under the XX mapping.
double magnetization_receiver(const ChainSpec& spec, double t);
double magnetization_receiver(const TransferPropagator& prop, double t);

/// sum over receiver-block bonds of (J_i / 2) <c+_i c_{i+1} + h.c.>.
double interaction_energy(const ChainDynamics& dyn, double t);

/// tr[H_1 (rho(0) - rho(t))] with H_1 the two block-wire bonds. The rho(0)
/// term vanishes for the product initial state.
double switching_energy(const ChainDynamics& dyn, double t);

/// <H> over the whole chain.
double total_energy(const ChainDynamics& dyn, double t);

enum class EnergyConvention { spin, particle };

struct BatteryReport {
  std::vector<double> times;
  std::vector<double> E_B;
  std::vector<double> E_onsite;
  std::vector<double> E_hop;
  std::vector<double> P_s;     ///< E_B / t; NaN at t = 0
  std::vector<double> dE_sw;
  double E_bar = 0.0;
  double tau_bar = 0.0;
  double P_tilde = 0.0;
  double tau_tilde = 0.0;
  double P_bar = 0.0;
  double max_abs_E_hop = 0.0;
  double max_abs_dE_sw = 0.0;
  std::vector<std::string> warnings;
};

/// Battery = receiver block, charger = sender block. The grid must be
/// strictly increasing and non-empty.
BatteryReport battery_metrics(const ChainDynamics& dyn, std::span<const double> grid,
                              EnergyConvention convention = EnergyConvention::spin,
                              int threads = 1);
BatteryReport battery_metrics(const ChainSpec& spec, std::span<const double> grid,
                              EnergyConvention convention = EnergyConvention::spin,
                              int threads = 1);

/// Coarse grid over [0, t_max] merged with a fine window of +-2 coarse steps
/// around the fermion transfer peak. Sorted, duplicates removed.
std::vector<double> two_tier_grid(const ChainSpec& spec, double t_max, double coarse_step,
                                  double fine_step = 0.25, int threads = 1);

}  // namespace ppxfer
