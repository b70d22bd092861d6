// ppxfer: command-line front end.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppxfer/cli/commands.hpp"
#include "ppxfer/cli/config.hpp"
#include "ppxfer/errors.hpp"

using namespace ppxfer;
using namespace ppxfer::cli;

namespace {

// Raw flag values; only options actually given on the command line are
// overlaid onto the config file.
struct Flags {
  std::string config;
  int ns = 0, nb = 0, nw = 0, nw_min = 0, nw_max = 0, l_min = 0, l_max = 0, family = 1, samples = 0;
  std::vector<int> ns_list;
  double j = 1.0, j0 = 0.0, h = 0.0, tmax = 0.0, asymmetry = 0.0;
  std::string stats, statistics, output, sidecar, format, energy;
  int threads = 1;
  bool magnetization = false;
};

struct Sub {
  CLI::App* app;
  std::map<std::string, CLI::Option*> opts;
  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(Sub& s, Flags& f) {
  s.opts["config"] = s.app->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  s.opts["output"] = s.app->add_option("-o,--output", f.output, "output file (default stdout)");
  s.opts["threads"] = s.app->add_option("--threads", f.threads, "worker threads (default $PPXFER_THREADS or 1)");
}

void add_chain(Sub& s, Flags& f, bool with_ns = true) {
  if (with_ns) s.opts["ns"] = s.app->add_option("--ns", f.ns, "sender (= receiver) block size");
  s.opts["nw"] = s.app->add_option("--nw", f.nw, "wire length");
  s.opts["j0"] = s.app->add_option("--j0", f.j0, "block-wire coupling in units of J");
  s.opts["h"] = s.app->add_option("--h", f.h, "uniform on-site energy");
  s.opts["j"] = s.app->add_option("--j", f.j, "bulk coupling")->group("");
  s.opts["statistics"] = s.app->add_option("--statistics", f.statistics, "fermion|boson (oracle statistics)");
}

RunConfig build_config(const std::string& name, const Sub& s, const Flags& f) {
  RunConfig cfg;
  cfg.subcommand = name;
  cfg.threads = default_threads();
  if (s.given("config")) load_config_file(cfg, f.config);
  cfg.subcommand = name;

  if (s.given("ns")) cfg.spec.n_s = cfg.spec.n_r = f.ns;
  if (s.given("nb")) cfg.spec.n_s = cfg.spec.n_r = f.nb;
  if (s.given("ns_list")) cfg.ns_list = f.ns_list;
  if (s.given("nw")) cfg.spec.n_w = f.nw;
  if (s.given("j")) cfg.spec.J = f.j;
  if (s.given("j0")) cfg.spec.J0 = f.j0;
  if (s.given("h")) cfg.spec.h = f.h;
  if (s.given("statistics")) cfg.spec.statistics = statistics_from_string(f.statistics);
  if (s.given("tmax")) cfg.t_max = f.tmax;
  if (s.given("samples")) cfg.samples = f.samples;
  if (s.given("stats")) cfg.stats = stats_from_string(f.stats);
  if (s.given("magnetization")) cfg.magnetization = f.magnetization;
  if (s.given("nw_min")) cfg.nw_min = f.nw_min;
  if (s.given("nw_max")) cfg.nw_max = f.nw_max;
  if (s.given("l_min")) cfg.l_min = f.l_min;
  if (s.given("l_max")) cfg.l_max = f.l_max;
  if (s.given("family")) cfg.family = f.family;
  if (s.given("energy")) cfg.energy = f.energy == "particle" ? EnergyConvention::particle : EnergyConvention::spin;
  if (s.given("asymmetry")) cfg.asymmetry = f.asymmetry;
  if (s.given("output")) cfg.output = f.output;
  if (s.given("sidecar")) cfg.sidecar = f.sidecar;
  if (s.given("format")) {
    nlohmann::json j = {{"format", f.format}};
    apply_json(cfg, j);
  }
  if (s.given("threads")) cfg.threads = f.threads;
  if (cfg.subcommand == "resonance" && !s.given("format") && cfg.format == OutputFormat::csv)
    cfg.format = OutputFormat::text;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-excitation transfer across weakly coupled hopping chains"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");
  Flags f;
  std::map<std::string, Sub> subs;

  auto make = [&](const std::string& name, const std::string& help) -> Sub& {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, help);
    s.app->set_help_flag("--help", "print this help and exit");  // --h is the on-site energy
    add_common(s, f);
    return s;
  };

  {
    Sub& s = make("spectrum", "single-particle eigenvalues and mirror parity (CSV)");
    add_chain(s, f);
  }
  {
    Sub& s = make("transfer", "n-excitation transfer probability curve (CSV + JSON sidecar)");
    add_chain(s, f);
    s.opts["tmax"] = s.app->add_option("--tmax", f.tmax, "scan end (default from predicted transfer time)");
    s.opts["samples"] = s.app->add_option("--samples", f.samples, "grid points");
    s.opts["stats"] = s.app->add_option("--stats", f.stats, "fermion|boson|both");
    s.opts["sidecar"] = s.app->add_option("--sidecar", f.sidecar, "summary JSON path");
    s.opts["magnetization"] = s.app->add_flag("--magnetization", f.magnetization, "add receiver magnetization column");
  }
  {
    Sub& s = make("resonance", "sender-wire resonance table");
    s.opts["ns"] = s.app->add_option("--ns", f.ns, "sender block size");
    s.opts["nw_min"] = s.app->add_option("--nw-min", f.nw_min, "first wire length");
    s.opts["nw_max"] = s.app->add_option("--nw-max", f.nw_max, "last wire length");
    s.opts["format"] = s.app->add_option("--format", f.format, "text|json");
  }
  {
    Sub& s = make("perturbation", "level clusters, splittings and predicted transfer time (JSON)");
    add_chain(s, f);
  }
  {
    Sub& s = make("battery", "quantum battery charging metrics (CSV + JSON summary)");
    add_chain(s, f, false);
    s.opts["nb"] = s.app->add_option("--nb", f.nb, "battery (= charger) size");
    s.opts["tmax"] = s.app->add_option("--tmax", f.tmax, "scan end (default from predicted transfer time)");
    s.opts["energy"] = s.app->add_option("--energy", f.energy, "spin|particle")->check(CLI::IsMember({"spin", "particle"}));
    s.opts["sidecar"] = s.app->add_option("--sidecar", f.sidecar, "summary JSON path");
  }
  {
    Sub& s = make("scaling", "transfer time against wire length");
    s.opts["ns_list"] = s.app->add_option("--ns", f.ns_list, "sender block sizes")->expected(1, -1);
    s.opts["l_min"] = s.app->add_option("--l-min", f.l_min, "smallest l");
    s.opts["l_max"] = s.app->add_option("--l-max", f.l_max, "largest l");
    s.opts["family"] = s.app->add_option("--family", f.family, "1: n_w = 20l+1, 17: 20l+17, 0: both");
    s.opts["j0"] = s.app->add_option("--j0", f.j0, "block-wire coupling");
    s.opts["sidecar"] = s.app->add_option("--sidecar", f.sidecar, "summary JSON path");
  }
  make("oracle-check", "determinant/permanent against Fock-space evolution");
  {
    Sub& s = make("validate", "full invariant suite");
    s.opts["asymmetry"] =
        s.app->add_option("--inject-asymmetry", f.asymmetry, "shift site 1 on-site energy (should make checks fail)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (const auto& [name, s] : subs) {
      if (!s.app->parsed()) continue;
      const RunConfig cfg = build_config(name, s, f);
      return run(cfg, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalConsistencyError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
