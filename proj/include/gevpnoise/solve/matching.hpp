#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <tuple>
#include <vector>

namespace gevpnoise::solve {

inline constexpr double kDefaultMatchWindow = 0.05;  // Hartree

struct MatchedPair {
  std::size_t reference;
  std::size_t computed;
  double delta;  // |E_computed - E_reference|
};

struct StateMatching {
  std::vector<MatchedPair> pairs;  // ascending reference index
  std::vector<std::size_t> missing_reference_states;
  double window = kDefaultMatchWindow;

  std::optional<std::size_t> computed_for(std::size_t reference) const {
    for (const auto& p : pairs)
      if (p.reference == reference) return p.computed;
    return std::nullopt;
  }
};

/// Greedy nearest-neighbour matching: candidate pairs within the window are
/// taken in order of increasing |Δ| (ties: lower reference, then lower
/// computed index), each state used at most once. Degenerate reference states
/// therefore need one computed value each.
inline StateMatching match_states(const std::vector<double>& computed, const std::vector<double>& reference,
                                  double window = kDefaultMatchWindow) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t r = 0; r < reference.size(); ++r)
    for (std::size_t c = 0; c < computed.size(); ++c) {
      const double d = std::abs(computed[c] - reference[r]);
      if (d <= window) candidates.emplace_back(d, r, c);
    }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> ref_used(reference.size(), false), comp_used(computed.size(), false);
  StateMatching out;
  out.window = window;
  for (const auto& [d, r, c] : candidates) {
    if (ref_used[r] || comp_used[c]) continue;
    ref_used[r] = comp_used[c] = true;
    out.pairs.push_back({r, c, d});
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) { return a.reference < b.reference; });
  for (std::size_t r = 0; r < reference.size(); ++r)
    if (!ref_used[r]) out.missing_reference_states.push_back(r);
  return out;
}

}  // namespace gevpnoise::solve
