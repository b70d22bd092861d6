#include "ppxfer/chain_model.hpp"

#include <cmath>

#include "ppxfer/errors.hpp"

namespace ppxfer {

std::string_view to_string(Statistics s) {
  return s == Statistics::fermion ? "fermion" : "boson";
}

Statistics statistics_from_string(std::string_view s) {
  if (s == "fermion") return Statistics::fermion;
  if (s == "boson") return Statistics::boson;
  throw ConfigError("unknown statistics '" + std::string(s) + "' (expected fermion|boson)");
}

ChainSpec ChainSpec::make(int n_s, int n_w, double J0, double h, Statistics stats) {
  ChainSpec spec;
  spec.n_s = n_s;
  spec.n_w = n_w;
  spec.n_r = n_s;
  spec.J0 = J0;
  spec.h = h;
  spec.statistics = stats;
  return spec;
}

std::vector<std::string> ChainSpec::validate() const {
  if (n_s < 1) throw ConfigError("n_s must be positive");
  if (n_w < 1) throw ConfigError("n_w must be positive");
  if (n_r != n_s) throw ConfigError("receiver block must match the sender block (n_r = n_s)");
  if (!std::isfinite(J0) || J0 <= 0.0) throw ConfigError("J0 must be positive and finite");
  if (!std::isfinite(J) || J <= 0.0) throw ConfigError("J must be positive and finite");
  if (!std::isfinite(h)) throw ConfigError("h must be finite");

  std::vector<std::string> warnings;
  if (J0 > 0.1 * J) {
    warnings.push_back("J0 = " + std::to_string(J0) +
                       " is outside the weak-coupling regime (J0 <= 0.1 J)");
  }
  return warnings;
}

bool CouplingProfile::mirror_symmetric(double tol) const {
  const auto n = onsite.size();
  for (std::size_t i = 0; i < hop.size(); ++i)
    if (std::abs(hop[i] - hop[hop.size() - 1 - i]) > tol) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(onsite[i] - onsite[n - 1 - i]) > tol) return false;
  return true;
}

CouplingProfile build_profile(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  CouplingProfile p;
  p.hop.assign(n - 1, spec.J);
  p.onsite.assign(n, spec.h);
  p.hop[spec.n_s - 1] = spec.J0;
  p.hop[spec.n_s + spec.n_w - 1] = spec.J0;
  return p;
}

Eigen::MatrixXd adjacency_matrix(const CouplingProfile& profile) {
  const int n = profile.sites();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = profile.onsite[i];
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = 0.5 * profile.hop[i];
    a(i + 1, i) = 0.5 * profile.hop[i];
  }
  return a;
}

Tridiagonal tridiagonal(const CouplingProfile& profile) {
  Tridiagonal t;
  t.diag = profile.onsite;
  t.off.reserve(profile.hop.size());
  for (double j : profile.hop) t.off.push_back(0.5 * j);
  return t;
}

}  // namespace ppxfer
