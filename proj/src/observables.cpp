#include "ppxfer/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppxfer/errors.hpp"
#include "ppxfer/parallel.hpp"

namespace ppxfer {

ChainDynamics::ChainDynamics(const ChainSpec& spec, std::optional<AsymmetryHook> hook)
    : spec_(spec), profile_(build_profile(spec)) {
  if (hook) {
    if (hook->site < 1 || hook->site > profile_.sites())
      throw ConfigError("asymmetry hook site outside chain");
    profile_.onsite[hook->site - 1] += hook->shift;
  }
  dec_ = diagonalize(profile_);
}

Eigen::MatrixXcd ChainDynamics::sender_rows(double t) const {
  const int n = sites();
  Eigen::VectorXcd ph(n);
  // a uniform on-site energy only adds a global phase; leaving it out keeps
  // the phase rounding at eps * |omega - h| * t
  for (int k = 0; k < n; ++k) ph[k] = std::polar(1.0, -(dec_.eigenvalues[k] - spec_.h) * t);
  const Eigen::MatrixXd& phi = dec_.eigenvectors;
  const Eigen::MatrixXcd left = phi.topRows(spec_.n_s).cast<cplx>() * ph.asDiagonal();
  return left * phi.transpose().cast<cplx>();
}

cplx ChainDynamics::correlation(const Eigen::MatrixXcd& rows, int i, int j) const {
  return rows.col(i).dot(rows.col(j));  // conjugates the first argument
}

std::vector<double> occupations(const ChainDynamics& dyn, double t) {
  const Eigen::MatrixXcd rows = dyn.sender_rows(t);
  std::vector<double> occ(dyn.sites());
  for (int j = 0; j < dyn.sites(); ++j) occ[j] = rows.col(j).squaredNorm();
  return occ;
}

double occupation(const ChainSpec& spec, double t, int site) {
  if (site < 1 || site > spec.sites()) throw std::out_of_range("site outside chain");
  return occupations(ChainDynamics(spec), t)[site - 1];
}

double magnetization_receiver(const TransferPropagator& prop, double t) {
  return prop.block(t).squaredNorm() - 0.5 * prop.n_s();
}

double magnetization_receiver(const ChainSpec& spec, double t) {
  return magnetization_receiver(TransferPropagator(spec), t);
}

namespace {

double bond_energy(const ChainDynamics& dyn, const Eigen::MatrixXcd& rows, int i) {
  return dyn.profile().hop[i] * dyn.correlation(rows, i, i + 1).real();
}

double receiver_hop_energy(const ChainDynamics& dyn, const Eigen::MatrixXcd& rows) {
  const int n = dyn.sites();
  double e = 0.0;
  for (int i = n - dyn.spec().n_r; i + 1 < n; ++i) e += bond_energy(dyn, rows, i);
  return e;
}

double switching_from_rows(const ChainDynamics& dyn, const Eigen::MatrixXcd& rows) {
  const int left = dyn.spec().n_s - 1;
  const int right = dyn.spec().n_s + dyn.spec().n_w - 1;
  return -(bond_energy(dyn, rows, left) + bond_energy(dyn, rows, right));
}

}  // namespace

double interaction_energy(const ChainDynamics& dyn, double t) {
  return receiver_hop_energy(dyn, dyn.sender_rows(t));
}

double switching_energy(const ChainDynamics& dyn, double t) {
  return switching_from_rows(dyn, dyn.sender_rows(t));
}

double total_energy(const ChainDynamics& dyn, double t) {
  const Eigen::MatrixXcd rows = dyn.sender_rows(t);
  double e = 0.0;
  for (int j = 0; j < dyn.sites(); ++j) e += dyn.profile().onsite[j] * rows.col(j).squaredNorm();
  for (int i = 0; i + 1 < dyn.sites(); ++i) e += bond_energy(dyn, rows, i);
  return e;
}

BatteryReport battery_metrics(const ChainDynamics& dyn, std::span<const double> grid,
                              EnergyConvention convention, int threads) {
  if (grid.empty()) throw ConfigError("battery grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("battery grid must be strictly increasing");
  if (grid.front() < 0.0) throw ConfigError("battery grid must start at t >= 0");

  const ChainSpec& spec = dyn.spec();
  const int n = dyn.sites();
  const int n_b = spec.n_r;
  const double offset = convention == EnergyConvention::spin ? 0.5 * n_b : 0.0;

  BatteryReport r;
  if (!(spec.h > 1.0)) r.warnings.push_back("h <= 1: the charged state is not the top of the battery spectrum");
  const std::size_t m = grid.size();
  r.times.assign(grid.begin(), grid.end());
  r.E_B.resize(m);
  r.E_onsite.resize(m);
  r.E_hop.resize(m);
  r.P_s.resize(m);
  r.dE_sw.resize(m);

  parallel_for(m, threads, [&](std::size_t i) {
    const double t = grid[i];
    const Eigen::MatrixXcd rows = dyn.sender_rows(t);
    double filled = 0.0;
    for (int j = n - n_b; j < n; ++j) filled += rows.col(j).squaredNorm();
    r.E_onsite[i] = spec.h * (filled - offset);
    r.E_hop[i] = receiver_hop_energy(dyn, rows);
    r.E_B[i] = r.E_onsite[i] + r.E_hop[i];
    r.P_s[i] = t > 0.0 ? r.E_B[i] / t : std::numeric_limits<double>::quiet_NaN();
    r.dE_sw[i] = t > 0.0 ? switching_from_rows(dyn, rows) : 0.0;
  });

  // earliest grid time attaining each maximum
  std::size_t ibar = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (r.E_B[i] > r.E_B[ibar]) ibar = i;
  r.E_bar = r.E_B[ibar];
  r.tau_bar = grid[ibar];
  r.P_bar = r.P_s[ibar];

  std::optional<std::size_t> itil;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isnan(r.P_s[i])) continue;
    if (!itil || r.P_s[i] > r.P_s[*itil]) itil = i;
  }
  if (itil) {
    r.P_tilde = r.P_s[*itil];
    r.tau_tilde = grid[*itil];
  } else {
    r.P_tilde = std::numeric_limits<double>::quiet_NaN();
    r.tau_tilde = std::numeric_limits<double>::quiet_NaN();
  }

  for (std::size_t i = 0; i < m; ++i) {
    r.max_abs_E_hop = std::max(r.max_abs_E_hop, std::abs(r.E_hop[i]));
    r.max_abs_dE_sw = std::max(r.max_abs_dE_sw, std::abs(r.dE_sw[i]));
  }
  return r;
}

BatteryReport battery_metrics(const ChainSpec& spec, std::span<const double> grid,
                              EnergyConvention convention, int threads) {
  return battery_metrics(ChainDynamics(spec), grid, convention, threads);
}

std::vector<double> two_tier_grid(const ChainSpec& spec, double t_max, double coarse_step,
                                  double fine_step, int threads) {
  if (!(t_max > 0.0) || !(coarse_step > 0.0) || !(fine_step > 0.0))
    throw ConfigError("grid needs positive t_max and steps");
  const TransferPropagator prop(spec);
  const Peak peak = find_fermion_peak(prop, {t_max, coarse_step, fine_step, threads});

  std::vector<double> grid;
  const auto coarse_count = static_cast<long long>(std::floor(t_max / coarse_step));
  for (long long i = 0; i <= coarse_count; ++i) grid.push_back(static_cast<double>(i) * coarse_step);
  const double lo = std::max(0.0, peak.time - 2.0 * coarse_step);
  const double hi = std::min(t_max, peak.time + 2.0 * coarse_step);
  const auto fine_count = static_cast<long long>(std::floor((hi - lo) / fine_step));
  for (long long i = 0; i <= fine_count; ++i) grid.push_back(lo + static_cast<double>(i) * fine_step);
  grid.push_back(peak.time);

  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return b - a < 1e-9; }),
             grid.end());
  return grid;
}

}  // namespace ppxfer
