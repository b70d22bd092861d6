// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ppxfer/amplitudes.hpp"
#include "ppxfer/cli/commands.hpp"
#include "ppxfer/cli/validate.hpp"
#include "ppxfer/observables.hpp"
#include "ppxfer/perturbation.hpp"
#include "ppxfer/resonance.hpp"

using namespace ppxfer;
using namespace ppxfer::cli;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.passed) ++failures;
  std::printf("[%s] %2d %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  criterion(1, "oracle equivalence", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = oracle_suite();
    const double secs = elapsed_since(t0);
    return Outcome{r.max_probability_deviation < 1e-10 && secs < 30.0,
                   std::to_string(r.cases) + " cases, max |dP| = " + fmt(r.max_probability_deviation, 3)};
  });

  criterion(2, "resonance table", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& table = resonance_table_reference();
    bool ok = true;
    std::string bad;
    for (int n_s = 1; n_s <= 4; ++n_s)
      for (int p = 0; p <= n_s; ++p) {
        if (resonance_count(n_s, p) != table[n_s - 1][p]) {
          ok = false;
          bad += " n_s=" + std::to_string(n_s) + ",p=" + std::to_string(p);
        }
        for (int l = 0; l <= 5; ++l) {
          const int n_w = (n_s + 1) * l + p;
          if (n_w >= 1 && static_cast<int>(resonant_pairs(n_s, n_w).size()) != table[n_s - 1][p]) ok = false;
        }
      }
    const double secs = elapsed_since(t0);
    return Outcome{ok && secs < 1.0, ok ? "all entries, l = 0..5" : "mismatch:" + bad};
  });

  criterion(3, "two-excitation transfer (N = 45)", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = analyze_transfer(ChainSpec::make(2, 41, 0.01), 0.0, 1);
    const double secs = elapsed_since(t0);
    const double dt = std::abs(a.fermion.time - a.boson.time);
    return Outcome{a.fermion.value >= 0.99 && a.boson.value >= 0.99 && dt <= a.coarse_step && secs < 10.0,
                   "P_f = " + fmt(a.fermion.value, 6) + ", P_b = " + fmt(a.boson.value, 6) + ", |dt| = " + fmt(dt, 3) +
                       " <= step " + fmt(a.coarse_step, 4)};
  });

  criterion(4, "three-excitation transfer (N = 47)", [] {
    const auto spec = ChainSpec::make(3, 41, 0.01);
    const auto a = analyze_transfer(spec, 0.0, 1);
    const double tau = a.prediction->tau;
    const double rel = std::abs(a.fermion.time - tau) / tau;

    // envelope against local maxima of the scanned curves
    const auto clusters = find_clusters(spec);
    const auto grid = uniform_grid(a.t_max, 20001);
    const auto curve = scan_transfer(spec, grid, StatsSelection::both);
    double excess = -1.0;
    for (const auto* p : {&curve.p_fermion, &curve.p_boson})
      for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        if ((*p)[i] >= (*p)[i - 1] && (*p)[i] >= (*p)[i + 1])
          excess = std::max(excess, (*p)[i] - envelope_3ex(spec, clusters, grid[i]));
    return Outcome{a.fermion.value >= 0.99 && a.boson.value >= 0.99 && rel <= 0.05 && excess <= 0.05,
                   "P_f = " + fmt(a.fermion.value, 6) + ", P_b = " + fmt(a.boson.value, 6) + ", argmax " +
                       fmt(a.fermion.time, 7) + " vs tau " + fmt(tau, 7) + " (" + fmt(100 * rel, 3) +
                       "%), max(P - envelope) at peaks = " + fmt(excess, 3)};
  });

  criterion(5, "negative classes (n_s = 3)", [] {
    bool ok = true;
    std::string detail;
    for (int n_w : {40, 42, 43}) {
      const auto spec = ChainSpec::make(3, n_w, 0.01);
      const auto clusters = find_clusters(spec);
      const auto a = analyze_transfer(spec, 10.0 * reference_time(clusters), 1, false);
      ok = ok && a.fermion.value < 0.9 && !a.prediction;
      detail += "n_w=" + std::to_string(n_w) + ": " + fmt(a.fermion.value, 4) + " ";
    }
    return Outcome{ok, detail + "(max over [0, 10 t_ref])"};
  });

  criterion(6, "ratio diagnostics", [] {
    struct Case {
      int n_s, n_w;
      double target;
    };
    const Case cases[] = {{3, 40, 0.50}, {3, 42, 0.50}, {4, 31, 0.14}, {4, 32, 0.14},
                          {4, 30, 0.38}, {4, 33, 0.38}, {4, 34, 0.38}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
      const auto d = ratio_diagnostics(ChainSpec::make(c.n_s, c.n_w, 1e-3)).front();
      ok = ok && std::abs(d.value - c.target) <= 0.02 && std::abs(d.cross_check - c.target) <= 0.02;
      detail += "(" + std::to_string(c.n_s) + "," + std::to_string(c.n_w) + ")=" + fmt(d.value, 4) + " ";
    }
    return Outcome{ok, detail};
  });

  criterion(7, "splitting orders", [] {
    const std::vector<double> j0 = {1e-3, 2e-3, 5e-3, 1e-2};
    const std::pair<int, int> reps[] = {{1, 20}, {1, 21}, {2, 40}, {2, 41}, {3, 40}, {3, 41}, {4, 32}, {4, 34}};
    double worst = 0.0;
    int resonant = 0, plain = 0;
    for (auto [n_s, n_w] : reps)
      for (const auto& f : splitting_scaling(ChainSpec::make(n_s, n_w, 0.01), j0)) {
        worst = std::max(worst, std::abs(f.exponent - f.expected_order));
        (f.expected_order == 1 ? resonant : plain)++;
      }
    return Outcome{worst <= 0.05 && resonant > 0 && plain > 0,
                   std::to_string(resonant) + " resonant, " + std::to_string(plain) +
                       " non-resonant clusters, max |exponent - order| = " + fmt(worst, 3)};
  });

  criterion(8, "transfer-time scaling", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lengths = scaling_lengths(1, 5, 1);
    std::vector<double> x(lengths.begin(), lengths.end());
    bool ok = true;
    std::string detail;
    for (int n_s = 1; n_s <= 4; ++n_s) {
      const auto rows = scaling_sweep(n_s, lengths, 0.01, 1);
      std::vector<double> tau;
      for (const auto& r : rows) tau.push_back(r.tau_exact);
      const double slope = loglog_slope(x, tau);
      const double target = n_s == 1 ? 0.5 : 1.0;
      ok = ok && std::abs(slope - target) <= 0.1;
      detail += "n_s=" + std::to_string(n_s) + ": " + fmt(slope, 3) + " (want " + fmt(target, 2) + ") ";
    }
    const double secs = elapsed_since(t0);
    return Outcome{ok && secs < 300.0, detail};
  });

  criterion(9, "receiver magnetization (N = 47)", [] {
    const auto spec = ChainSpec::make(3, 41, 0.01);
    const auto a = analyze_transfer(spec, 0.0, 1, false);
    const TransferPropagator prop(spec);
    const ChainDynamics dyn(spec);
    const double m = magnetization_receiver(prop, a.fermion.time);

    std::mt19937_64 rng(4711);
    std::uniform_real_distribution<double> u(0.0, 2.0 * a.fermion.time);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng);
      const auto occ = occupations(dyn, t);
      const double receivers = occ[44] + occ[45] + occ[46];
      worst = std::max(worst, std::abs(magnetization_receiver(prop, t) + 1.5 - receivers));
    }
    return Outcome{m >= 1.5 - 0.02 && worst <= 1e-12,
                   "M(tau) = " + fmt(m, 6) + ", Frobenius identity max error " + fmt(worst, 3)};
  });

  criterion(10, "quantum battery (n_B = 4, n_w = 32, h = 2)", [] {
    const auto spec = ChainSpec::make(4, 32, 0.01, 2.0);
    const auto clusters = find_clusters(spec);
    const double t_max = 1.5 * predict_transfer_time(spec, clusters).tau;
    const auto grid = two_tier_grid(spec, t_max, coarse_scan_step(clusters));
    const auto r = battery_metrics(spec, grid);
    const bool ok = r.E_bar >= 4 * 2.0 / 2 - 0.05 * 2.0 && r.max_abs_E_hop < 1e-10 && r.max_abs_dE_sw < 1e-10 &&
                    r.tau_tilde < r.tau_bar;
    return Outcome{ok, "E_bar = " + fmt(r.E_bar, 6) + " at " + fmt(r.tau_bar, 7) + ", P_tilde at " +
                           fmt(r.tau_tilde, 7) + ", max|E_hop| = " + fmt(r.max_abs_E_hop, 3) +
                           ", max|dE_sw| = " + fmt(r.max_abs_dE_sw, 3) + ", " + std::to_string(grid.size()) +
                           " times"};
  });

  criterion(11, "structural invariants", [] {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> ns(1, 4), nw(1, 45), coin(0, 1);
    std::uniform_real_distribution<double> logj0(-3.0, 0.0), hd(-2.0, 2.0), logt(-1.0, 4.5);
    double unit = 0.0, mirror = 0.0, parity = 0.0, pmin = 1.0, pmax = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double h = coin(rng) ? 0.0 : hd(rng);
      const auto spec = ChainSpec::make(ns(rng), nw(rng), std::pow(10.0, logj0(rng)), h);
      const double t = std::pow(10.0, logt(rng));
      const auto dec = diagonalize(build_profile(spec));
      const Eigen::MatrixXcd f = amplitude_matrix(dec, t).entries;
      const int n = dec.size();
      unit = std::max(unit, (f.adjoint() * f - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          mirror = std::max({mirror, std::abs(f(a, b) - f(n - 1 - b, n - 1 - a)),
                             std::abs(f(a, b) - f(n - 1 - a, n - 1 - b))});
          if (h == 0.0) parity = std::max(parity, std::abs((a - b) % 2 == 0 ? f(a, b).imag() : f(a, b).real()));
        }
      const TransferPropagator prop(dec, spec.n_s);
      const Eigen::MatrixXcd sub = prop.block(t);
      for (double p : {std::norm(determinant(sub)), std::norm(permanent(sub))}) {
        pmin = std::min(pmin, p);
        pmax = std::max(pmax, p);
      }
    }
    const bool ok = unit < 1e-10 && mirror < 1e-12 && parity < 1e-10 && pmin >= 0.0 && pmax <= 1.0 + 1e-9;
    return Outcome{ok, "unitarity " + fmt(unit, 3) + ", persym/centrosym " + fmt(mirror, 3) + ", parity " +
                           fmt(parity, 3) + ", P in [" + fmt(pmin, 3) + ", " + fmt(pmax, 10) + "]"};
  });

  criterion(12, "statistics independence", [] {
    const auto r = oracle_suite();
    return Outcome{r.max_occupation_deviation < 1e-10,
                   "max |n(amplitude) - n(oracle)| = " + fmt(r.max_occupation_deviation, 3) + " over " +
                       std::to_string(r.cases) + " (instance, time) pairs"};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
