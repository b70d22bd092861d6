#include "ppxfer/resonance.hpp"

#include <algorithm>

#include "ppxfer/errors.hpp"

namespace ppxfer {

namespace {

void check_sizes(int n_s, int n_w) {
  if (n_s < 1) throw ConfigError("n_s must be positive");
  if (n_w < 1) throw ConfigError("n_w must be positive");
}

}  // namespace

std::string_view to_string(Feasibility f) {
  switch (f) {
    case Feasibility::PP: return "PP";
    case Feasibility::quasiPP: return "quasiPP";
    case Feasibility::none: return "none";
    case Feasibility::allLengths: return "allLengths";
    case Feasibility::unclassified: return "unclassified";
  }
  return "unclassified";
}

std::vector<ResonantPair> resonant_pairs(int n_s, int n_w) {
  check_sizes(n_s, n_w);
  const long long block = n_s + 1;
  const long long wire = n_w + 1;
  std::vector<ResonantPair> pairs;
  for (int k = 1; k <= n_s; ++k) {
    if ((k * wire) % block != 0) continue;
    const long long q = k * wire / block;
    if (q >= 1 && q <= n_w) pairs.push_back({k, static_cast<int>(q)});
  }
  return pairs;
}

bool is_resonant(int n_s, int n_w, int k) {
  const auto pairs = resonant_pairs(n_s, n_w);
  return std::any_of(pairs.begin(), pairs.end(), [k](const ResonantPair& p) { return p.k == k; });
}

int resonance_count(int n_s, int p) {
  if (n_s < 1) throw ConfigError("n_s must be positive");
  if (p < 0 || p > n_s) throw ConfigError("residue p must lie in 0..n_s");
  return static_cast<int>(resonant_pairs(n_s, (n_s + 1) + p).size());
}

Feasibility pp_feasible(int n_s, int n_w) {
  check_sizes(n_s, n_w);
  switch (n_s) {
    case 1:
    case 2:
      return Feasibility::allLengths;
    case 3:
      return n_w % 4 == 1 ? Feasibility::PP : Feasibility::none;
    case 4:
      return (n_w % 5 == 1 || n_w % 5 == 2) ? Feasibility::quasiPP : Feasibility::none;
    default:
      return Feasibility::unclassified;
  }
}

std::vector<int> universal_lengths(int l_max) {
  if (l_max < 0) throw ConfigError("l_max must be >= 0");
  std::vector<int> out;
  for (int l = 0; l <= l_max; ++l) {
    out.push_back(20 * l + 1);
    out.push_back(20 * l + 17);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ResonanceReport resonance_report(int n_s, int n_w) {
  ResonanceReport r;
  r.n_s = n_s;
  r.n_w = n_w;
  r.pairs = resonant_pairs(n_s, n_w);
  r.n_res = static_cast<int>(r.pairs.size());
  r.residue = n_w % (n_s + 1);
  r.quotient = n_w / (n_s + 1);
  r.feasibility = pp_feasible(n_s, n_w);
  return r;
}

}  // namespace ppxfer
