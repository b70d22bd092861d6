#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppxfer/amplitudes.hpp"
#include "ppxfer/chain_model.hpp"
#include "ppxfer/observables.hpp"

namespace ppxfer::cli {

enum class OutputFormat { csv, json, text };

struct RunConfig {
  std::string subcommand;
  ChainSpec spec = ChainSpec::make(2, 41, 0.01);

  // time grid; t_max <= 0 means "derive from the predicted transfer time"
  double t_max = 0.0;
  int samples = 2001;
  StatsSelection stats = StatsSelection::both;
  bool magnetization = false;  ///< transfer: add the receiver magnetization column

  // resonance table range
  int nw_min = 1;
  int nw_max = 20;

  // scaling sweep
  std::vector<int> ns_list = {1, 2, 3, 4};
  int l_min = 1;
  int l_max = 5;
  int family = 1;  ///< 1 -> n_w = 20l + 1, 17 -> 20l + 17, 0 -> both

  EnergyConvention energy = EnergyConvention::spin;
  std::optional<double> asymmetry;  ///< on-site shift injected by `validate`

  std::string output;   ///< empty -> stdout
  std::string sidecar;  ///< empty -> <output>.json, or none on stdout
  OutputFormat format = OutputFormat::csv;
  int threads = 1;
};

/// Overlays keys from a JSON object; unknown keys raise ConfigError so typos
/// do not pass silently.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
void load_config_file(RunConfig& cfg, const std::string& path);

nlohmann::json spec_json(const ChainSpec& spec);
nlohmann::json to_json(const RunConfig& cfg);

/// Default worker count: PPXFER_THREADS if set and positive, else 1.
int default_threads();

StatsSelection stats_from_string(const std::string& s);
std::string to_string(StatsSelection s);

}  // namespace ppxfer::cli
