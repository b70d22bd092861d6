#include "ppxfer/cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ppxfer/amplitudes.hpp"
#include "ppxfer/cli/commands.hpp"
#include "ppxfer/many_body_oracle.hpp"
#include "ppxfer/observables.hpp"
#include "ppxfer/parallel.hpp"
#include "ppxfer/perturbation.hpp"
#include "ppxfer/resonance.hpp"

namespace ppxfer::cli {

namespace {

struct OracleCase {
  int sites;
  int particles;
};

constexpr OracleCase kOracleCases[] = {{6, 2}, {7, 2}, {8, 3}};
constexpr double kOracleJ0[] = {1.0, 0.1};
constexpr double kOracleTimes[] = {0.0, 7.3, 19.1, 33.7, 50.0};

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// Small mirror-symmetric chains used by the structural checks.
std::vector<ChainSpec> structural_specs() {
  return {ChainSpec::make(1, 3, 0.3),  ChainSpec::make(2, 5, 0.1),        ChainSpec::make(3, 7, 0.05),
          ChainSpec::make(2, 41, 0.01), ChainSpec::make(3, 41, 0.01, 0.7), ChainSpec::make(4, 9, 0.2, -0.4)};
}

constexpr double kStructuralTimes[] = {0.0, 0.37, 3.1, 17.0, 250.5, 1.0e4};

}  // namespace

OracleSuiteResult oracle_suite(int threads) {
  struct Instance {
    ChainSpec spec;
  };
  std::vector<Instance> instances;
  for (const auto& c : kOracleCases)
    for (double j0 : kOracleJ0)
      for (Statistics s : {Statistics::fermion, Statistics::boson})
        instances.push_back({ChainSpec::make(c.particles, c.sites - 2 * c.particles, j0, 0.0, s)});

  std::vector<double> dp(instances.size()), dn(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    const ChainSpec& spec = instances[i].spec;
    const SectorPropagator fock(build_profile(spec), enumerate_basis(spec.sites(), spec.n_s, spec.statistics));
    const TransferPropagator prop(spec);
    const ChainDynamics dyn(spec);
    for (double t : kOracleTimes) {
      const double p = spec.statistics == Statistics::fermion ? prop.fermion(t) : prop.boson(t);
      dp[i] = std::max(dp[i], std::abs(p - oracle_transfer_prob(fock, t)));
      const auto occ = occupations(dyn, t);
      const auto ref = oracle_occupations(fock, t);
      for (std::size_t j = 0; j < occ.size(); ++j) dn[i] = std::max(dn[i], std::abs(occ[j] - ref[j]));
    }
  });

  OracleSuiteResult r;
  r.cases = static_cast<int>(instances.size() * std::size(kOracleTimes));
  r.max_probability_deviation = *std::max_element(dp.begin(), dp.end());
  r.max_occupation_deviation = *std::max_element(dn.begin(), dn.end());
  return r;
}

const std::vector<std::vector<int>>& resonance_table_reference() {
  static const std::vector<std::vector<int>> table = {{0, 1}, {0, 0, 2}, {0, 1, 0, 3}, {0, 0, 0, 0, 4}};
  return table;
}

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  std::vector<CheckResult> out;

  // unitarity and mirror structure of F(t)
  {
    double unit = 0.0, persym = 0.0, centro = 0.0, parity = 0.0;
    for (const auto& spec : structural_specs()) {
      const auto dec = diagonalize(build_profile(spec));
      const int n = dec.size();
      for (double t : kStructuralTimes) {
        const Eigen::MatrixXcd f = amplitude_matrix(dec, t).entries;
        unit = std::max(unit, (f.adjoint() * f - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            persym = std::max(persym, std::abs(f(i, j) - f(n - 1 - j, n - 1 - i)));
            centro = std::max(centro, std::abs(f(i, j) - f(n - 1 - i, n - 1 - j)));
          }
      }
      if (spec.h == 0.0) {
        for (double t : kStructuralTimes) {
          const Eigen::MatrixXcd f = amplitude_matrix(dec, t).entries;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              parity = std::max(parity, (i - j) % 2 == 0 ? std::abs(f(i, j).imag()) : std::abs(f(i, j).real()));
        }
      }
    }
    out.push_back({"unitarity", unit < 1e-10, "max |F^H F - 1| = " + sci(unit)});
    out.push_back({"persymmetry", persym < 1e-12, "max deviation " + sci(persym)});
    out.push_back({"centrosymmetry", centro < 1e-12, "max deviation " + sci(centro)});
    out.push_back({"parity-reality", parity < 1e-10, "max forbidden component " + sci(parity)});
  }

  // probabilities stay in [0, 1]
  {
    bool ok = true;
    std::string detail = "all samples inside [0, 1 + 1e-9]";
    try {
      for (const auto& spec : structural_specs()) {
        const TransferPropagator prop(spec);
        for (double t : kStructuralTimes) {
          prop.fermion(t);
          if (spec.n_s <= kMaxPermanentOrder) prop.boson(t);
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    out.push_back({"probability bounds", ok, detail});
  }

  {
    const OracleSuiteResult r = oracle_suite(opts.threads);
    out.push_back({"oracle equivalence", r.max_probability_deviation < 1e-10,
                   std::to_string(r.cases) + " cases, max deviation " + sci(r.max_probability_deviation)});
    out.push_back({"statistics independence", r.max_occupation_deviation < 1e-10,
                   "max occupation deviation " + sci(r.max_occupation_deviation)});
  }

  {
    bool ok = true;
    std::ostringstream detail;
    const auto& table = resonance_table_reference();
    for (int n_s = 1; n_s <= 4; ++n_s)
      for (int p = 0; p <= n_s; ++p)
        for (int l = 0; l <= 5; ++l) {
          const int n_w = (n_s + 1) * l + p;
          if (n_w < 1) continue;
          const int got = static_cast<int>(resonant_pairs(n_s, n_w).size());
          if (got != table[n_s - 1][p]) {
            ok = false;
            detail << "n_s=" << n_s << " n_w=" << n_w << " gives " << got << "; ";
          }
        }
    out.push_back({"resonance table", ok, ok ? "n_s = 1..4, l = 0..5" : detail.str()});
  }

  {
    struct Expect {
      int n_s, n_w;
      double value;
    };
    const Expect cases[] = {{3, 40, 0.5}, {3, 42, 0.5}, {4, 31, 0.14}, {4, 32, 0.14},
                            {4, 30, 0.38}, {4, 33, 0.38}, {4, 34, 0.38}};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : cases) {
      const auto d = ratio_diagnostics(ChainSpec::make(c.n_s, c.n_w, 1e-3));
      const double v = d.front().value;
      const bool good = std::abs(v - c.value) <= 0.02 && d.front().error() <= 0.02;
      ok = ok && good;
      detail << d.front().name << "(" << c.n_w << ")=" << format_number(std::round(v * 1e4) / 1e4) << ' ';
    }
    out.push_back({"ratio diagnostics", ok, detail.str()});
  }

  {
    std::optional<AsymmetryHook> hook;
    if (opts.asymmetry) hook = AsymmetryHook{1, *opts.asymmetry};
    double e_int = 0.0, e_sw = 0.0;
    for (const auto& spec : structural_specs()) {
      const ChainDynamics dyn(spec, hook);
      for (double t : kStructuralTimes) {
        e_int = std::max(e_int, std::abs(interaction_energy(dyn, t)));
        e_sw = std::max(e_sw, std::abs(switching_energy(dyn, t)));
      }
    }
    out.push_back({"zero interaction energy", e_int < 1e-10, "max |E_I| = " + sci(e_int)});
    out.push_back({"zero switching energy", e_sw < 1e-10, "max |dE_sw| = " + sci(e_sw)});
  }
  return out;
}

}  // namespace ppxfer::cli
