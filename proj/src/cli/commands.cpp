#include "ppxfer/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ppxfer/cli/validate.hpp"
#include "ppxfer/errors.hpp"
#include "ppxfer/observables.hpp"
#include "ppxfer/parallel.hpp"
#include "ppxfer/spectral.hpp"

namespace ppxfer::cli {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

// Writes to the configured file, or to `fallback` when none is set.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void csv_header(std::ostream& os, const RunConfig& cfg) { os << "# " << to_json(cfg).dump() << '\n'; }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Summary JSON goes to the sidecar file when one is known; otherwise it is
// appended to the main stream as a comment line.
void emit_summary(const RunConfig& cfg, std::ostream& main, const json& summary) {
  std::string path = cfg.sidecar;
  if (path.empty() && !cfg.output.empty()) path = cfg.output + ".json";
  if (path.empty()) {
    main << "# summary " << summary.dump() << '\n';
    return;
  }
  std::ofstream side(path);
  if (!side) throw ConfigError("cannot open sidecar file '" + path + "'");
  side << summary.dump(2) << '\n';
}

json prediction_json(const std::optional<TransferTimePrediction>& p) {
  if (!p) return nullptr;
  return {{"tau", p->tau},
          {"tau_caption", p->tau_caption},
          {"slow_k", p->slow_k},
          {"slow_frequency", p->slow_frequency}};
}

}  // namespace

TransferAnalysis analyze_transfer(const ChainSpec& spec, double t_max, int threads, bool with_boson) {
  spec.validate();
  TransferAnalysis a;
  const auto clusters = find_clusters(spec);
  a.feasibility = pp_feasible(spec.n_s, spec.n_w);
  try {
    a.prediction = predict_transfer_time(spec, clusters);
  } catch (const NoTransferPredicted&) {
    a.prediction.reset();
  }
  a.reference_time = reference_time(clusters);
  a.coarse_step = coarse_scan_step(clusters);
  a.t_max = t_max > 0.0 ? t_max : (a.prediction ? 1.5 * a.prediction->tau : 10.0 * a.reference_time);

  const TransferPropagator prop(spec);
  a.fermion = find_fermion_peak(prop, {a.t_max, a.coarse_step, 0.25, threads});
  if (with_boson && spec.n_s <= kMaxPermanentOrder)
    a.boson = find_windowed_boson_peak(prop, a.fermion.time, boson_window_width(spec.J));
  return a;
}

std::vector<int> scaling_lengths(int l_min, int l_max, int family) {
  if (l_min < 0 || l_max < l_min) throw ConfigError("scaling needs 0 <= l_min <= l_max");
  if (family != 0 && family != 1 && family != 17) throw ConfigError("family must be 1, 17 or 0 (both)");
  std::vector<int> out;
  for (int n_w : universal_lengths(l_max)) {
    const int l = n_w / 20;
    if (l < l_min) continue;
    if (family != 0 && n_w % 20 != family) continue;
    out.push_back(n_w);
  }
  return out;
}

std::vector<ScalingRow> scaling_sweep(int n_s, std::span<const int> lengths, double j0, int threads) {
  std::vector<ScalingRow> rows(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const ChainSpec spec = ChainSpec::make(n_s, lengths[i], j0);
    const TransferAnalysis a = analyze_transfer(spec, 0.0, threads, false);
    rows[i].n_s = n_s;
    rows[i].n_w = lengths[i];
    rows[i].tau_exact = a.fermion.time;
    rows[i].tau_predicted = a.prediction ? a.prediction->tau : std::nan("");
    rows[i].peak = a.fermion.value;
  }
  return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs two or more points");
  const std::size_t m = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  cfg.spec.validate();
  const auto dec = diagonalize(build_profile(cfg.spec));
  Sink sink(cfg.output, out);
  csv_header(*sink, cfg);
  *sink << "k,omega,symmetry\n";
  for (int k = 0; k < dec.size(); ++k) {
    const int parity = mirror_parity(dec, k);
    *sink << k + 1 << ',' << format_number(dec.eigenvalues[k]) << ','
          << (parity > 0 ? "+" : parity < 0 ? "-" : "0") << '\n';
  }
  return kExitOk;
}

int cmd_transfer(const RunConfig& cfg, std::ostream& out) {
  const ChainSpec& spec = cfg.spec;
  const auto warnings = spec.validate();
  const TransferAnalysis a = analyze_transfer(spec, cfg.t_max, cfg.threads, cfg.stats != StatsSelection::fermion);
  const auto grid = uniform_grid(a.t_max, cfg.samples);
  const TransferCurve curve = scan_transfer(spec, grid, cfg.stats, cfg.threads);
  std::vector<double> magnetization;
  if (cfg.magnetization) {
    const TransferPropagator prop(spec);
    magnetization.resize(grid.size());
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) { magnetization[i] = magnetization_receiver(prop, grid[i]); });
  }

  Sink sink(cfg.output, out);
  RunConfig shown = cfg;
  shown.t_max = a.t_max;
  csv_header(*sink, shown);
  *sink << (cfg.magnetization ? "t,p_fermion,p_boson,m_receiver\n" : "t,p_fermion,p_boson\n");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    *sink << format_number(grid[i]) << ',';
    if (!curve.p_fermion.empty()) *sink << format_number(curve.p_fermion[i]);
    *sink << ',';
    if (!curve.p_boson.empty()) *sink << format_number(curve.p_boson[i]);
    if (cfg.magnetization) *sink << ',' << format_number(magnetization[i]);
    *sink << '\n';
  }

  json summary = {{"config", to_json(shown)},
                  {"feasibility", std::string(to_string(a.feasibility))},
                  {"pp_predicted", a.prediction.has_value()},
                  {"prediction", prediction_json(a.prediction)},
                  {"reference_time", a.reference_time},
                  {"coarse_step", a.coarse_step},
                  {"peak_time", a.fermion.time},
                  {"peak_fermion", a.fermion.value},
                  {"warnings", warnings}};
  if (cfg.stats != StatsSelection::fermion) {
    summary["peak_boson"] = a.boson.value;
    summary["peak_boson_time"] = a.boson.time;
  }
  if (!a.prediction) summary["note"] = "no PP transfer predicted";
  emit_summary(cfg, *sink, summary);
  return kExitOk;
}

int cmd_resonance(const RunConfig& cfg, std::ostream& out) {
  if (cfg.spec.n_s < 1) throw ConfigError("n_s must be positive");
  if (cfg.nw_min < 1 || cfg.nw_max < cfg.nw_min) throw ConfigError("need 1 <= nw_min <= nw_max");
  Sink sink(cfg.output, out);
  std::vector<ResonanceReport> reports;
  for (int n_w = cfg.nw_min; n_w <= cfg.nw_max; ++n_w) reports.push_back(resonance_report(cfg.spec.n_s, n_w));

  if (cfg.format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& r : reports) {
      json pairs = json::array();
      for (const auto& p : r.pairs) pairs.push_back({{"k", p.k}, {"q", p.q}});
      arr.push_back({{"n_s", r.n_s},
                     {"n_w", r.n_w},
                     {"residue", r.residue},
                     {"quotient", r.quotient},
                     {"n_res", r.n_res},
                     {"pairs", pairs},
                     {"feasibility", std::string(to_string(r.feasibility))}});
    }
    *sink << arr.dump(2) << '\n';
    return kExitOk;
  }
  *sink << std::left << std::setw(5) << "n_s" << std::setw(6) << "n_w" << std::setw(4) << "p"
        << std::setw(4) << "l" << std::setw(7) << "n_res" << std::setw(14) << "feasibility"
        << "pairs (k,q)\n";
  for (const auto& r : reports) {
    std::ostringstream pairs;
    for (const auto& p : r.pairs) pairs << '(' << p.k << ',' << p.q << ')';
    *sink << std::left << std::setw(5) << r.n_s << std::setw(6) << r.n_w << std::setw(4) << r.residue
          << std::setw(4) << r.quotient << std::setw(7) << r.n_res << std::setw(14)
          << to_string(r.feasibility) << pairs.str() << '\n';
  }
  return kExitOk;
}

int cmd_perturbation(const RunConfig& cfg, std::ostream& out) {
  const auto warnings = cfg.spec.validate();
  const PerturbationReport r = perturbation_report(cfg.spec);
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    std::vector<int> levels;
    for (int l : c.levels) levels.push_back(l + 1);
    clusters.push_back({{"k", c.k},
                        {"unperturbed", c.unperturbed},
                        {"multiplicity", c.multiplicity},
                        {"levels", levels},
                        {"delta", c.splitting},
                        {"rabi_frequency", c.rabi_frequency()},
                        {"order", c.order}});
  }
  json ratios = json::array();
  for (const auto& d : r.ratios)
    ratios.push_back({{"name", d.name}, {"value", d.value}, {"cross_check", d.cross_check}, {"error", d.error()}});

  json report = {{"config", spec_json(cfg.spec)},
                 {"clusters", clusters},
                 {"slowest_delta", r.slowest_splitting},
                 {"rule_of_thumb",
                  {{"holds", r.rule.holds}, {"ratio", r.rule.ratio}, {"slow_k", r.rule.slow_k}}},
                 {"feasibility", std::string(to_string(r.feasibility))},
                 {"prediction", prediction_json(r.prediction)},
                 {"reference_time", r.reference_time},
                 {"ratios", ratios},
                 {"warnings", warnings}};
  Sink sink(cfg.output, out);
  *sink << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_battery(const RunConfig& cfg, std::ostream& out) {
  const ChainSpec& spec = cfg.spec;
  const auto warnings = spec.validate();
  const auto clusters = find_clusters(spec);
  double t_max = cfg.t_max;
  if (t_max <= 0.0) {
    try {
      t_max = 1.5 * predict_transfer_time(spec, clusters).tau;
    } catch (const NoTransferPredicted&) {
      t_max = 10.0 * reference_time(clusters);
    }
  }
  const double coarse = coarse_scan_step(clusters);
  const auto grid = two_tier_grid(spec, t_max, coarse, 0.25, cfg.threads);
  const BatteryReport r = battery_metrics(spec, grid, cfg.energy, cfg.threads);

  Sink sink(cfg.output, out);
  RunConfig shown = cfg;
  shown.t_max = t_max;
  csv_header(*sink, shown);
  *sink << "t,E_B,E_onsite,E_hop,P_s\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    *sink << format_number(r.times[i]) << ',' << format_number(r.E_B[i]) << ','
          << format_number(r.E_onsite[i]) << ',' << format_number(r.E_hop[i]) << ','
          << format_number(r.P_s[i]) << '\n';

  std::vector<std::string> all_warnings = warnings;
  all_warnings.insert(all_warnings.end(), r.warnings.begin(), r.warnings.end());
  const json summary = {{"config", to_json(shown)},
                        {"E_bar", r.E_bar},
                        {"tau_bar", r.tau_bar},
                        {"P_tilde", number_or_null(r.P_tilde)},
                        {"tau_tilde", number_or_null(r.tau_tilde)},
                        {"P_bar", number_or_null(r.P_bar)},
                        {"dE_sw_max_abs", r.max_abs_dE_sw},
                        {"E_hop_max_abs", r.max_abs_E_hop},
                        {"warnings", all_warnings}};
  emit_summary(cfg, *sink, summary);
  return kExitOk;
}

int cmd_scaling(const RunConfig& cfg, std::ostream& out) {
  const auto lengths = scaling_lengths(cfg.l_min, cfg.l_max, cfg.family);
  if (lengths.size() < 2) throw ConfigError("scaling needs at least two wire lengths");
  Sink sink(cfg.output, out);
  csv_header(*sink, cfg);
  *sink << "n_s,n_w,tau_exact,tau_predicted,peak\n";

  json exponents = json::array();
  for (int n_s : cfg.ns_list) {
    const auto rows = scaling_sweep(n_s, lengths, cfg.spec.J0, cfg.threads);
    std::vector<double> x, exact, predicted;
    for (const auto& r : rows) {
      *sink << r.n_s << ',' << r.n_w << ',' << format_number(r.tau_exact) << ','
            << format_number(r.tau_predicted) << ',' << format_number(r.peak) << '\n';
      x.push_back(r.n_w);
      exact.push_back(r.tau_exact);
      predicted.push_back(r.tau_predicted);
    }
    const bool have_pred = std::all_of(predicted.begin(), predicted.end(), [](double v) { return std::isfinite(v); });
    exponents.push_back({{"n_s", n_s},
                         {"exponent_exact", loglog_slope(x, exact)},
                         {"exponent_predicted", have_pred ? json(loglog_slope(x, predicted)) : json(nullptr)}});
  }
  emit_summary(cfg, *sink, {{"config", to_json(cfg)}, {"exponents", exponents}});
  return kExitOk;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out) {
  const OracleSuiteResult r = oracle_suite(cfg.threads);
  Sink sink(cfg.output, out);
  const bool ok = r.max_probability_deviation < 1e-10 && r.max_occupation_deviation < 1e-10;
  *sink << "cases " << r.cases << '\n'
        << "max |P(det/perm) - P(fock)| = " << format_number(r.max_probability_deviation) << '\n'
        << "max |n(amplitude) - n(fock)| = " << format_number(r.max_occupation_deviation) << '\n'
        << (ok ? "ok" : "FAIL") << '\n';
  return ok ? kExitOk : kExitValidation;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  ValidationOptions opts;
  opts.asymmetry = cfg.asymmetry;
  opts.threads = cfg.threads;
  const auto results = run_validation(opts);
  Sink sink(cfg.output, out);
  bool ok = true;
  for (const auto& r : results) {
    *sink << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitValidation;
}

int run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  const std::string& c = cfg.subcommand;
  if (c == "spectrum") return cmd_spectrum(cfg, out);
  if (c == "transfer") return cmd_transfer(cfg, out);
  if (c == "resonance") return cmd_resonance(cfg, out);
  if (c == "perturbation") return cmd_perturbation(cfg, out);
  if (c == "battery") return cmd_battery(cfg, out);
  if (c == "scaling") return cmd_scaling(cfg, out);
  if (c == "oracle-check") return cmd_oracle_check(cfg, out);
  if (c == "validate") return cmd_validate(cfg, out);
  throw ConfigError("unknown subcommand '" + c + "'");
}

}  // namespace ppxfer::cli
