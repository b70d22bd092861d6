#include "ppxfer/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ppxfer/errors.hpp"

namespace ppxfer {

std::vector<LevelCluster> find_clusters(const SpectralDecomposition& dec, const ChainSpec& spec) {
  spec.validate();
  const int n = dec.size();
  const auto energies = sender_spectrum(spec.n_s, spec.h);

  std::vector<int> owner(n, 0);
  std::vector<LevelCluster> clusters;
  clusters.reserve(spec.n_s);
  for (int k = 1; k <= spec.n_s; ++k) {
    LevelCluster c;
    c.k = k;
    c.unperturbed = energies[k - 1];
    const bool resonant = is_resonant(spec.n_s, spec.n_w, k);
    c.multiplicity = resonant ? 3 : 2;
    c.order = resonant ? 1 : 2;

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + c.multiplicity, idx.end(), [&](int a, int b) {
      return std::abs(dec.eigenvalues[a] - c.unperturbed) < std::abs(dec.eigenvalues[b] - c.unperturbed);
    });
    c.levels.assign(idx.begin(), idx.begin() + c.multiplicity);
    std::sort(c.levels.begin(), c.levels.end());

    for (int level : c.levels) {
      if (owner[level] != 0) {
        std::ostringstream msg;
        msg << "level " << level + 1 << " (E = " << dec.eigenvalues[level]
            << ") is nearest to sender modes k = " << owner[level] << " and k = " << k
            << "; J0 = " << spec.J0 << " is too large for cluster assignment";
        throw ClusterAmbiguityError(msg.str());
      }
      owner[level] = k;
    }
    c.splitting = 0.5 * (dec.eigenvalues[c.levels.back()] - dec.eigenvalues[c.levels.front()]);
    clusters.push_back(std::move(c));
  }
  return clusters;
}

std::vector<LevelCluster> find_clusters(const ChainSpec& spec) {
  return find_clusters(diagonalize(build_profile(spec)), spec);
}

std::vector<SplittingFit> splitting_scaling(const ChainSpec& spec, std::span<const double> j0_list) {
  if (j0_list.size() < 3) throw ConfigError("splitting fit needs at least three J0 values");
  const auto [lo, hi] = std::minmax_element(j0_list.begin(), j0_list.end());
  if (*lo <= 0.0 || *hi > 0.1) throw ConfigError("J0 values must lie in (0, 0.1]");
  if (*hi / *lo < 10.0 * (1.0 - 1e-12)) throw ConfigError("J0 values must span at least one decade");

  const std::size_t m = j0_list.size();
  std::vector<double> x(m);
  std::vector<std::vector<double>> y(spec.n_s, std::vector<double>(m));
  std::vector<int> orders(spec.n_s);
  for (std::size_t i = 0; i < m; ++i) {
    ChainSpec s = spec;
    s.J0 = j0_list[i];
    const auto clusters = find_clusters(s);
    x[i] = std::log(j0_list[i]);
    for (int c = 0; c < spec.n_s; ++c) {
      y[c][i] = std::log(clusters[c].splitting);
      orders[c] = clusters[c].order;
    }
  }

  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0;
  for (double xi : x) sxx += (xi - xm) * (xi - xm);

  std::vector<SplittingFit> fits;
  for (int c = 0; c < spec.n_s; ++c) {
    const double ym = std::accumulate(y[c].begin(), y[c].end(), 0.0) / static_cast<double>(m);
    double sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) sxy += (x[i] - xm) * (y[c][i] - ym);
    fits.push_back({c + 1, sxy / sxx, orders[c]});
  }
  return fits;
}

RuleOfThumb rule_of_thumb(std::span<const LevelCluster> clusters) {
  if (clusters.empty()) throw ConfigError("rule of thumb needs at least one cluster");
  const int n_s = static_cast<int>(clusters.size());

  // One representative per mirror pair {k, n_s + 1 - k}.
  struct Freq {
    int k;
    double omega;
  };
  std::vector<Freq> freqs;
  for (const auto& c : clusters) {
    if (c.k > n_s + 1 - c.k) continue;
    freqs.push_back({c.k, c.rabi_frequency()});
  }
  std::sort(freqs.begin(), freqs.end(), [](const Freq& a, const Freq& b) { return a.omega < b.omega; });

  RuleOfThumb r;
  r.slow_k = freqs.front().k;
  r.slow_frequency = freqs.front().omega;
  if (freqs.size() == 1) {
    r.holds = true;
    r.ratio = 0.0;
    return r;
  }
  r.ratio = freqs[0].omega / freqs[1].omega;
  r.holds = r.ratio <= kRuleOfThumbThreshold;
  return r;
}

TransferTimePrediction predict_transfer_time(const ChainSpec& spec,
                                             std::span<const LevelCluster> clusters) {
  const RuleOfThumb rule = rule_of_thumb(clusters);
  const Feasibility feas = pp_feasible(spec.n_s, spec.n_w);
  const bool quasi = feas == Feasibility::quasiPP;
  if (!rule.holds && !quasi) {
    std::ostringstream msg;
    msg << "no PP transfer predicted for n_s = " << spec.n_s << ", n_w = " << spec.n_w
        << " (frequency ratio " << rule.ratio << " > " << kRuleOfThumbThreshold << ")";
    throw NoTransferPredicted(msg.str());
  }
  TransferTimePrediction p;
  p.slow_k = rule.slow_k;
  p.slow_frequency = rule.slow_frequency;
  p.tau = std::numbers::pi / (2.0 * rule.slow_frequency);
  p.tau_caption = std::numbers::pi / rule.slow_frequency;
  return p;
}

TransferTimePrediction predict_transfer_time(const ChainSpec& spec) {
  const auto clusters = find_clusters(spec);
  return predict_transfer_time(spec, clusters);
}

double reference_time(std::span<const LevelCluster> clusters) {
  double dmin = clusters.front().splitting;
  for (const auto& c : clusters) dmin = std::min(dmin, c.splitting);
  return std::numbers::pi / (2.0 * dmin);
}

double coarse_scan_step(std::span<const LevelCluster> clusters) {
  double dmax = 0.0;
  for (const auto& c : clusters) dmax = std::max(dmax, c.splitting);
  return std::numbers::pi / (40.0 * dmax);
}

std::vector<RatioDiagnostic> ratio_diagnostics(const ChainSpec& spec) {
  spec.validate();
  if (spec.n_s != 3 && spec.n_s != 4) return {};

  auto ratio_at = [&](double j0) {
    ChainSpec s = spec;
    s.J0 = j0;
    const auto clusters = find_clusters(s);
    return clusters[0].splitting / clusters[1].splitting;
  };
  RatioDiagnostic d;
  d.name = spec.n_s == 3 ? "(E6-E5)/(2E4)" : "omega78/omega56";
  d.value = ratio_at(1e-3);
  d.cross_check = ratio_at(1e-4);
  return {d};
}

double envelope_3ex(const ChainSpec& spec, std::span<const LevelCluster> clusters, double t) {
  if (spec.n_s != 3 || clusters.size() != 3)
    throw ConfigError("three-excitation envelope needs n_s = 3");
  if (spec.n_w % 4 == 1) {
    const double s = std::sin(clusters[0].rabi_frequency() * t);
    return s * s * s * s;
  }
  const double e4 = clusters[1].splitting;
  const double d = clusters[0].splitting;
  const double sum = std::sin(e4 * t) + std::sin(d * t);
  return std::abs(0.25 * sum * sum * std::sin(d * t));
}

double envelope_3ex(const ChainSpec& spec, double t) {
  const auto clusters = find_clusters(spec);
  return envelope_3ex(spec, clusters, t);
}

Rational approximate_rational(double x, long long max_den) {
  if (!std::isfinite(x)) throw ConfigError("cannot approximate a non-finite ratio");
  if (max_den < 1) throw ConfigError("max_den must be positive");
  // Convergents h_n / k_n of the continued fraction of x.
  long long h_prev = 1, h = static_cast<long long>(std::floor(x));
  long long k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  while (frac > 1e-12) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<long long>(std::floor(inv));
    const long long k_next = a * k + k_prev;
    if (k_next > max_den) break;
    const long long h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - static_cast<double>(a);
  }
  return {h, k};
}

namespace {

// Smallest m >= 0 (then n >= 0) with b (4m + r) = a (4n + r).
std::optional<std::pair<long long, long long>> solve_congruence(long long a, long long b, long long r) {
  // n = (b (4m + r) - a r) / (4 a); m only matters modulo a, n grows with m.
  for (long long m = 0; m <= 4 * a + 4; ++m) {
    const long long numer = b * (4 * m + r) - a * r;
    if (numer < 0 || numer % (4 * a) != 0) continue;
    return std::pair{m, numer / (4 * a)};
  }
  return std::nullopt;
}

}  // namespace

CommensurabilityVerdict commensurability_check(Rational ratio) {
  if (ratio.den <= 0 || ratio.num <= 0) throw ConfigError("ratio must be a positive rational");
  const long long g = std::gcd(ratio.num, ratio.den);
  const long long a = ratio.num / g;
  const long long b = ratio.den / g;

  CommensurabilityVerdict v;
  v.ratio = {a, b};
  v.solution_1mod4 = solve_congruence(a, b, 1);
  v.solution_3mod4 = solve_congruence(a, b, 3);
  v.feasible = v.solution_1mod4.has_value() || v.solution_3mod4.has_value();

  // b (4m + 1) = a (4n + 1)  <=>  4b m = 4a n + (a - b); likewise with 3 (a - b).
  std::ostringstream w;
  if (v.feasible) {
    if (v.solution_1mod4) {
      w << a << "/" << b << " = (4m+1)/(4n+1) with m = " << v.solution_1mod4->first
        << ", n = " << v.solution_1mod4->second;
    } else {
      w << a << "/" << b << " = (4m+3)/(4n+3) with m = " << v.solution_3mod4->first
        << ", n = " << v.solution_3mod4->second;
    }
  } else {
    auto equation = [&](long long shift) {
      std::ostringstream e;
      e << 4 * b << "m = " << 4 * a << "n " << (shift < 0 ? "- " : "+ ") << std::abs(shift);
      return e.str();
    };
    const long long d = a - b;
    if (d % 2 != 0) {
      w << equation(d) << " and " << equation(3 * d)
        << ": left side even, right side odd";
    } else {
      w << equation(d) << " and " << equation(3 * d) << ": right side not divisible by 4";
    }
  }
  v.witness = w.str();
  return v;
}

PerturbationReport perturbation_report(const ChainSpec& spec) {
  PerturbationReport r;
  r.clusters = find_clusters(spec);
  r.slowest_splitting = r.clusters.front().splitting;
  for (const auto& c : r.clusters) r.slowest_splitting = std::min(r.slowest_splitting, c.splitting);
  r.rule = rule_of_thumb(r.clusters);
  r.feasibility = pp_feasible(spec.n_s, spec.n_w);
  try {
    r.prediction = predict_transfer_time(spec, r.clusters);
  } catch (const NoTransferPredicted&) {
    r.prediction.reset();
  }
  r.reference_time = reference_time(r.clusters);
  r.ratios = ratio_diagnostics(spec);
  return r;
}

}  // namespace ppxfer
