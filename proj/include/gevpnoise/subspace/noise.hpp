#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/subspace/rng.hpp"

namespace gevpnoise::subspace {

enum class NoiseKind { pauli_binomial, gaussian_approx };

inline std::string to_string(NoiseKind k) { return k == NoiseKind::pauli_binomial ? "pauli_binomial" : "gaussian_approx"; }
inline NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "pauli_binomial") return NoiseKind::pauli_binomial;
  if (s == "gaussian_approx") return NoiseKind::gaussian_approx;
  throw FormatError("unknown noise kind '" + s + "'");
}

/// How a per-element shot budget maps onto the Pauli terms of that element.
enum class ShotAccounting {
  per_term,     // every term gets the full budget
  split_total,  // the budget is divided evenly across the element's terms
};

inline std::string to_string(ShotAccounting a) { return a == ShotAccounting::per_term ? "per_term" : "split_total"; }
inline ShotAccounting shot_accounting_from_string(const std::string& s) {
  if (s == "per_term") return ShotAccounting::per_term;
  if (s == "split_total") return ShotAccounting::split_total;
  throw FormatError("unknown shot accounting '" + s + "'");
}

struct ShotNoiseModel {
  NoiseKind kind = NoiseKind::pauli_binomial;
  std::int64_t shots_per_pauli_term = 10000;
  std::uint64_t seed = 0;
  ShotAccounting accounting = ShotAccounting::per_term;
  bool sample_imaginary = false;
};

/// Finite-shot estimate of a Pauli expectation value x in [-1, 1].
///   pauli_binomial:  m ~ Binomial(n, (1+x)/2), returns 2m/n - 1
///   gaussian_approx: x + Normal(0, sqrt((1-x^2)/n)), clamped to [-1, 1]
template <class Rng>
double sample_pauli_expectation(double x, std::int64_t shots, NoiseKind kind, Rng& rng) {
  if (shots < 1) throw DomainError("sample_pauli_expectation: shots must be >= 1");
  if (!std::isfinite(x) || std::abs(x) > 1.0 + 1e-10) throw DomainError("sample_pauli_expectation: |x| > 1");
  x = std::clamp(x, -1.0, 1.0);
  if (x == 1.0 || x == -1.0) return x;
  const double n = static_cast<double>(shots);
  if (kind == NoiseKind::pauli_binomial) {
    std::binomial_distribution<std::int64_t> dist(shots, 0.5 * (1.0 + x));
    return 2.0 * static_cast<double>(dist(rng)) / n - 1.0;
  }
  std::normal_distribution<double> dist(0.0, std::sqrt((1.0 - x * x) / n));
  return std::clamp(x + dist(rng), -1.0, 1.0);
}

}  // namespace gevpnoise::subspace
