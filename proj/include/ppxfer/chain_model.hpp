#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ppxfer {

enum class Statistics { fermion, boson };

std::string_view to_string(Statistics s);
Statistics statistics_from_string(std::string_view s);

/// Sender-wire-receiver chain. Energies in units of the bulk coupling J.
///
/// Sites are numbered 0..N-1 internally; every user-facing output uses
/// 1-based labels.
struct ChainSpec {
  int n_s = 1;  ///< sender sites, equal to the number of excitations
  int n_w = 1;  ///< wire sites
  int n_r = 1;  ///< receiver sites, must equal n_s
  double J = 1.0;
  double J0 = 0.01;
  double h = 0.0;
  Statistics statistics = Statistics::fermion;

  static ChainSpec make(int n_s, int n_w, double J0, double h = 0.0,
                        Statistics stats = Statistics::fermion);

  int sites() const { return n_s + n_w + n_r; }

  /// Throws ConfigError on hard violations; returns soft warnings
  /// (weak-coupling regime left, etc.).
  std::vector<std::string> validate() const;
};

struct CouplingProfile {
  std::vector<double> hop;     ///< N-1 physical couplings J_i
  std::vector<double> onsite;  ///< N on-site energies h_i

  int sites() const { return static_cast<int>(onsite.size()); }
  bool mirror_symmetric(double tol = 0.0) const;
};

CouplingProfile build_profile(const ChainSpec& spec);

/// Single-particle Hamiltonian: A_ii = h_i, A_{i,i+1} = A_{i+1,i} = J_i / 2.
Eigen::MatrixXd adjacency_matrix(const CouplingProfile& profile);

/// Same matrix in band form: diagonal and the N-1 off-diagonal entries.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

Tridiagonal tridiagonal(const CouplingProfile& profile);

}  // namespace ppxfer
