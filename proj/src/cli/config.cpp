#include "ppxfer/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "ppxfer/errors.hpp"

namespace ppxfer::cli {

using nlohmann::json;

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

StatsSelection stats_from_string(const std::string& s) {
  if (s == "fermion") return StatsSelection::fermion;
  if (s == "boson") return StatsSelection::boson;
  if (s == "both") return StatsSelection::both;
  throw ConfigError("unknown statistics selection '" + s + "' (fermion|boson|both)");
}

std::string to_string(StatsSelection s) {
  switch (s) {
    case StatsSelection::fermion: return "fermion";
    case StatsSelection::boson: return "boson";
    case StatsSelection::both: return "both";
  }
  return "both";
}

void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "subcommand", "n_s",    "n_w",     "n_r",    "nb",      "j",       "j0",
      "h",          "statistics", "tmax",  "samples", "stats", "magnetization", "nw_min",
      "nw_max",     "ns_list", "l_min",  "l_max",  "family",  "energy",  "asymmetry",
      "output",     "sidecar", "format", "threads"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

  if (j.contains("subcommand")) cfg.subcommand = get_as<std::string>(j, "subcommand");
  if (j.contains("n_s")) cfg.spec.n_s = get_as<int>(j, "n_s");
  if (j.contains("nb")) cfg.spec.n_s = get_as<int>(j, "nb");
  cfg.spec.n_r = j.contains("n_r") ? get_as<int>(j, "n_r") : cfg.spec.n_s;
  if (j.contains("n_w")) cfg.spec.n_w = get_as<int>(j, "n_w");
  if (j.contains("j")) cfg.spec.J = get_as<double>(j, "j");
  if (j.contains("j0")) cfg.spec.J0 = get_as<double>(j, "j0");
  if (j.contains("h")) cfg.spec.h = get_as<double>(j, "h");
  if (j.contains("statistics"))
    cfg.spec.statistics = statistics_from_string(get_as<std::string>(j, "statistics"));
  if (j.contains("tmax")) cfg.t_max = get_as<double>(j, "tmax");
  if (j.contains("samples")) cfg.samples = get_as<int>(j, "samples");
  if (j.contains("stats")) cfg.stats = stats_from_string(get_as<std::string>(j, "stats"));
  if (j.contains("magnetization")) cfg.magnetization = get_as<bool>(j, "magnetization");
  if (j.contains("nw_min")) cfg.nw_min = get_as<int>(j, "nw_min");
  if (j.contains("nw_max")) cfg.nw_max = get_as<int>(j, "nw_max");
  if (j.contains("ns_list")) cfg.ns_list = get_as<std::vector<int>>(j, "ns_list");
  if (j.contains("l_min")) cfg.l_min = get_as<int>(j, "l_min");
  if (j.contains("l_max")) cfg.l_max = get_as<int>(j, "l_max");
  if (j.contains("family")) cfg.family = get_as<int>(j, "family");
  if (j.contains("energy")) {
    const auto e = get_as<std::string>(j, "energy");
    if (e == "spin") cfg.energy = EnergyConvention::spin;
    else if (e == "particle") cfg.energy = EnergyConvention::particle;
    else throw ConfigError("energy must be spin or particle");
  }
  if (j.contains("asymmetry")) cfg.asymmetry = get_as<double>(j, "asymmetry");
  if (j.contains("output")) cfg.output = get_as<std::string>(j, "output");
  if (j.contains("sidecar")) cfg.sidecar = get_as<std::string>(j, "sidecar");
  if (j.contains("format")) {
    const auto f = get_as<std::string>(j, "format");
    if (f == "csv") cfg.format = OutputFormat::csv;
    else if (f == "json") cfg.format = OutputFormat::json;
    else if (f == "text") cfg.format = OutputFormat::text;
    else throw ConfigError("format must be csv, json or text");
  }
  if (j.contains("threads")) cfg.threads = get_as<int>(j, "threads");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_json(cfg, j);
}

json spec_json(const ChainSpec& spec) {
  return {{"n_s", spec.n_s},
          {"n_w", spec.n_w},
          {"n_r", spec.n_r},
          {"j", spec.J},
          {"j0", spec.J0},
          {"h", spec.h},
          {"statistics", std::string(to_string(spec.statistics))}};
}

json to_json(const RunConfig& cfg) {
  json j = spec_json(cfg.spec);
  j["subcommand"] = cfg.subcommand;
  j["tmax"] = cfg.t_max;
  j["samples"] = cfg.samples;
  j["stats"] = to_string(cfg.stats);
  if (cfg.subcommand == "transfer") j["magnetization"] = cfg.magnetization;
  if (cfg.subcommand == "resonance") {
    j["nw_min"] = cfg.nw_min;
    j["nw_max"] = cfg.nw_max;
  }
  if (cfg.subcommand == "scaling") {
    j["ns_list"] = cfg.ns_list;
    j["l_min"] = cfg.l_min;
    j["l_max"] = cfg.l_max;
    j["family"] = cfg.family;
  }
  if (cfg.subcommand == "battery") j["energy"] = cfg.energy == EnergyConvention::spin ? "spin" : "particle";
  return j;
}

int default_threads() {
  if (const char* env = std::getenv("PPXFER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

}  // namespace ppxfer::cli
