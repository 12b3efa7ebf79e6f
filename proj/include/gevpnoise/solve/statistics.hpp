#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/solve/matching.hpp"

namespace gevpnoise::solve {

enum class Pairing {
  rank,   // k-th computed value against k-th reference value
  match,  // match_states within a window
};

inline std::string to_string(Pairing p) { return p == Pairing::rank ? "rank" : "match"; }

struct StateStatistics {
  std::size_t reference_index = 0;
  double reference_energy = 0.0;
  std::size_t samples = 0;  // repetitions contributing
  std::size_t missing = 0;  // repetitions solved but without this state
  std::size_t failed = 0;   // repetitions whose solve failed
  double mean_energy = std::numeric_limits<double>::quiet_NaN();
  double mean_error = std::numeric_limits<double>::quiet_NaN();      // mean of (E - E_ref)
  double mean_abs_error = std::numeric_limits<double>::quiet_NaN();  // mean of |E - E_ref|
  double variance = std::numeric_limits<double>::quiet_NaN();        // unbiased; 0 for one sample

  bool defined() const noexcept { return samples > 0; }
};

/// Per-reference-state mean and variance over repetitions. A repetition
/// given as nullopt is a failed solve and counts as failed for every state.
inline std::vector<StateStatistics> eigenvalue_statistics(const std::vector<std::optional<std::vector<double>>>& repetitions,
                                                          const std::vector<double>& reference, Pairing pairing = Pairing::rank,
                                                          double window = kDefaultMatchWindow) {
  if (repetitions.empty()) throw DomainError("eigenvalue_statistics: no repetitions");
  std::vector<std::vector<double>> values(reference.size());
  std::vector<StateStatistics> out(reference.size());
  for (std::size_t r = 0; r < reference.size(); ++r) {
    out[r].reference_index = r;
    out[r].reference_energy = reference[r];
  }
  for (const auto& rep : repetitions) {
    if (!rep) {
      for (auto& s : out) ++s.failed;
      continue;
    }
    if (pairing == Pairing::rank) {
      for (std::size_t r = 0; r < reference.size(); ++r) {
        if (r < rep->size()) values[r].push_back((*rep)[r]);
        else ++out[r].missing;
      }
    } else {
      const auto m = match_states(*rep, reference, window);
      for (const auto& p : m.pairs) values[p.reference].push_back((*rep)[p.computed]);
      for (auto r : m.missing_reference_states) ++out[r].missing;
    }
  }
  for (std::size_t r = 0; r < reference.size(); ++r) {
    const auto& v = values[r];
    auto& s = out[r];
    s.samples = v.size();
    if (v.empty()) continue;
    double sum = 0.0, abs_err = 0.0;
    for (double e : v) {
      sum += e;
      abs_err += std::abs(e - reference[r]);
    }
    const double n = static_cast<double>(v.size());
    s.mean_energy = sum / n;
    s.mean_error = s.mean_energy - reference[r];
    s.mean_abs_error = abs_err / n;
    double ss = 0.0;
    for (double e : v) ss += (e - s.mean_energy) * (e - s.mean_energy);
    s.variance = v.size() > 1 ? ss / (n - 1.0) : 0.0;
  }
  return out;
}

/// Average of mean_abs_error over the first `k` states that have statistics.
inline double mean_abs_error_lowest(const std::vector<StateStatistics>& stats, std::size_t k) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& s : stats) {
    if (used == k) break;
    if (!s.defined()) continue;
    sum += s.mean_abs_error;
    ++used;
  }
  return used == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(used);
}

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SizeMismatch("spearman: need two equal-length series of length >= 2");
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace gevpnoise::solve
