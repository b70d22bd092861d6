#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ppxfer/chain_model.hpp"

namespace ppxfer {

// Brute-force evolution in a fixed-particle-number sector of the Fock space.
// Ground truth for the determinant/permanent formulas and for the claim that
// one-body observables do not depend on the statistics.
//
// Fermionic sign convention. States are c+_{p1} ... c+_{pn} |0> with
// p1 < ... < pn (Jordan-Wigner order). Moving one particle from site i to
// i+1 passes no other occupied site, so every nearest-neighbour hopping
// element carries sign +1. The fermionic sector matrix is therefore the
// hard-core restriction of the bosonic one.

using Occupation = std::vector<std::uint8_t>;

inline constexpr std::size_t kMaxSectorDimension = 100000;

struct SectorBasis {
  int sites = 0;
  int particles = 0;
  Statistics statistics = Statistics::fermion;
  std::vector<Occupation> states;  ///< lexicographically ascending
  std::map<Occupation, int> index;

  int dimension() const { return static_cast<int>(states.size()); }
  int find(const Occupation& occ) const;  ///< -1 when absent
};

/// Number of states before enumeration: C(N, n) or C(N + n - 1, n).
std::size_t sector_dimension(int sites, int particles, Statistics stats);

/// Throws DimensionError above kMaxSectorDimension.
SectorBasis enumerate_basis(int sites, int particles, Statistics stats);

/// Dense real symmetric matrix of the hopping Hamiltonian on the sector.
Eigen::MatrixXd build_sector_hamiltonian(const CouplingProfile& profile, const SectorBasis& basis);

/// Eigen-decomposed sector Hamiltonian for repeated time evolution.
class SectorPropagator {
 public:
  SectorPropagator(const CouplingProfile& profile, SectorBasis basis);

  const SectorBasis& basis() const { return basis_; }
  const Eigen::VectorXd& energies() const { return energies_; }

  /// exp(-i H t) applied to the basis state `from`.
  Eigen::VectorXcd evolve(int from, double t) const;

 private:
  SectorBasis basis_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

/// Occupation with the first n sites filled (the sender block).
Occupation sender_configuration(int sites, int n);
/// Occupation with the last n sites filled (the receiver block).
Occupation receiver_configuration(int sites, int n);

/// |<receivers| exp(-i H t) |senders>|^2 in the n_s-particle sector.
double oracle_transfer_prob(const ChainSpec& spec, double t);
double oracle_transfer_prob(const SectorPropagator& prop, double t);

/// <n_site(t)> for the sender-filled initial state; `site` is 1-based.
double oracle_occupation(const ChainSpec& spec, double t, int site);
std::vector<double> oracle_occupations(const SectorPropagator& prop, double t);

}  // namespace ppxfer
