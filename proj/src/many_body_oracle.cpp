#include "ppxfer/many_body_oracle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ppxfer/errors.hpp"

namespace ppxfer {

namespace {

// Binomial coefficient saturating at kMaxSectorDimension + 1.
std::size_t binomial_capped(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<long double>(kMaxSectorDimension) + 1.0L) return kMaxSectorDimension + 1;
  }
  return static_cast<std::size_t>(std::llround(r));
}

// All occupation vectors with `remaining` particles over sites [site, N),
// emitted in lexicographic order of the full vector.
void enumerate(Occupation& occ, int site, int remaining, int cap, std::vector<Occupation>& out) {
  const int n = static_cast<int>(occ.size());
  if (site == n) {
    if (remaining == 0) out.push_back(occ);
    return;
  }
  for (int k = 0; k <= std::min(cap, remaining); ++k) {
    occ[site] = static_cast<std::uint8_t>(k);
    enumerate(occ, site + 1, remaining - k, cap, out);
  }
  occ[site] = 0;
}

}  // namespace

int SectorBasis::find(const Occupation& occ) const {
  const auto it = index.find(occ);
  return it == index.end() ? -1 : it->second;
}

std::size_t sector_dimension(int sites, int particles, Statistics stats) {
  return stats == Statistics::fermion ? binomial_capped(sites, particles)
                                      : binomial_capped(sites + particles - 1, particles);
}

SectorBasis enumerate_basis(int sites, int particles, Statistics stats) {
  if (sites < 1 || particles < 0) throw ConfigError("sector needs sites >= 1 and particles >= 0");
  if (particles > 255) throw DimensionError("occupations above 255 are not representable");
  const std::size_t dim = sector_dimension(sites, particles, stats);
  if (dim > kMaxSectorDimension)
    throw DimensionError("sector dimension exceeds cap of " + std::to_string(kMaxSectorDimension));

  SectorBasis basis;
  basis.sites = sites;
  basis.particles = particles;
  basis.statistics = stats;
  basis.states.reserve(dim);
  Occupation occ(sites, 0);
  enumerate(occ, 0, particles, stats == Statistics::fermion ? 1 : particles, basis.states);
  for (int i = 0; i < basis.dimension(); ++i) basis.index.emplace(basis.states[i], i);
  return basis;
}

Eigen::MatrixXd build_sector_hamiltonian(const CouplingProfile& profile, const SectorBasis& basis) {
  if (profile.sites() != basis.sites) throw ConfigError("profile and basis disagree on site count");
  const int dim = basis.dimension();
  const int n = basis.sites;
  const int cap = basis.statistics == Statistics::fermion ? 1 : basis.particles;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

  for (int col = 0; col < dim; ++col) {
    const Occupation& occ = basis.states[col];
    double diag = 0.0;
    for (int i = 0; i < n; ++i) diag += profile.onsite[i] * occ[i];
    h(col, col) = diag;

    // (J_i / 2) c+_{to} c_{from} on each bond, both directions.
    for (int i = 0; i + 1 < n; ++i) {
      for (const auto& [from, to] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
        if (occ[from] == 0 || occ[to] >= cap) continue;
        Occupation next = occ;
        next[from] -= 1;
        next[to] += 1;
        const int row = basis.find(next);
        const double bose = std::sqrt(static_cast<double>(occ[from]) * (occ[to] + 1));
        h(row, col) += 0.5 * profile.hop[i] * bose;
      }
    }
  }
  return h;
}

SectorPropagator::SectorPropagator(const CouplingProfile& profile, SectorBasis basis)
    : basis_(std::move(basis)) {
  const Eigen::MatrixXd h = build_sector_hamiltonian(profile, basis_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw ConvergenceError("sector eigensolver failed");
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Eigen::VectorXcd SectorPropagator::evolve(int from, double t) const {
  const Eigen::Index dim = energies_.size();
  Eigen::VectorXcd coeff(dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    coeff[k] = std::polar(vectors_(from, k), -energies_[k] * t);
  return vectors_.cast<std::complex<double>>() * coeff;
}

Occupation sender_configuration(int sites, int n) {
  Occupation occ(sites, 0);
  for (int i = 0; i < n; ++i) occ[i] = 1;
  return occ;
}

Occupation receiver_configuration(int sites, int n) {
  Occupation occ(sites, 0);
  for (int i = sites - n; i < sites; ++i) occ[i] = 1;
  return occ;
}

double oracle_transfer_prob(const SectorPropagator& prop, double t) {
  const auto& b = prop.basis();
  const int from = b.find(sender_configuration(b.sites, b.particles));
  const int to = b.find(receiver_configuration(b.sites, b.particles));
  const Eigen::VectorXcd psi = prop.evolve(from, t);
  return std::norm(psi[to]);
}

double oracle_transfer_prob(const ChainSpec& spec, double t) {
  const SectorPropagator prop(build_profile(spec),
                              enumerate_basis(spec.sites(), spec.n_s, spec.statistics));
  return oracle_transfer_prob(prop, t);
}

std::vector<double> oracle_occupations(const SectorPropagator& prop, double t) {
  const auto& b = prop.basis();
  const int from = b.find(sender_configuration(b.sites, b.particles));
  const Eigen::VectorXcd psi = prop.evolve(from, t);
  std::vector<double> occ(b.sites, 0.0);
  for (int s = 0; s < b.dimension(); ++s) {
    const double w = std::norm(psi[s]);
    for (int i = 0; i < b.sites; ++i) occ[i] += w * b.states[s][i];
  }
  return occ;
}

double oracle_occupation(const ChainSpec& spec, double t, int site) {
  if (site < 1 || site > spec.sites()) throw std::out_of_range("site outside chain");
  const SectorPropagator prop(build_profile(spec),
                              enumerate_basis(spec.sites(), spec.n_s, spec.statistics));
  return oracle_occupations(prop, t)[site - 1];
}

}  // namespace ppxfer
