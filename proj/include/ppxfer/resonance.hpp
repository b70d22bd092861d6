#pragma once

#include <string_view>
#include <vector>

namespace ppxfer {

/// Sender mode k (1..n_s) degenerate with wire mode q (1..n_w) at J0 = 0.
struct ResonantPair {
  int k = 0;
  int q = 0;
  friend bool operator==(const ResonantPair&, const ResonantPair&) = default;
};

enum class Feasibility { PP, quasiPP, none, allLengths, unclassified };

std::string_view to_string(Feasibility f);

struct ResonanceReport {
  int n_s = 0;
  int n_w = 0;
  int residue = 0;   ///< p = n_w mod (n_s + 1)
  int quotient = 0;  ///< m with n_w = m (n_s + 1) + p
  std::vector<ResonantPair> pairs;
  int n_res = 0;
  Feasibility feasibility = Feasibility::unclassified;
};

/// All (k, q) with k (n_w + 1) = q (n_s + 1), by exact integer divisibility.
std::vector<ResonantPair> resonant_pairs(int n_s, int n_w);

/// True when sender mode k has a resonant wire partner.
bool is_resonant(int n_s, int n_w, int k);

/// Number of resonances for residue p of the wire length modulo n_s + 1.
int resonance_count(int n_s, int p);

/// Known transfer classes for n_s <= 4; larger blocks are `unclassified`.
Feasibility pp_feasible(int n_s, int n_w);

/// Wire lengths 20 l + 1 and 20 l + 17 for l = 0..l_max, sorted. These
/// admit transfer for every n_s = 1..4 simultaneously.
std::vector<int> universal_lengths(int l_max);

ResonanceReport resonance_report(int n_s, int n_w);

}  // namespace ppxfer
