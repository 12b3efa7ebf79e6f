#pragma once

#include <cmath>
#include <numbers>

#include "gevpnoise/core/error.hpp"

namespace gevpnoise::chem {

/// Zeroth-order Boys function F0(t) = \int_0^1 exp(-t u^2) du.
inline double boys_f0(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("boys_f0: argument must be finite and non-negative");
  if (t < 1e-3) {
    // Taylor series sum_k (-t)^k / (k! (2k+1)); 8 terms is well below 1e-16 here.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 8; ++k) {
      term *= -t / k;
      sum += term / (2 * k + 1);
    }
    return sum;
  }
  const double s = std::sqrt(t);
  return 0.5 * std::sqrt(std::numbers::pi / t) * std::erf(s);
}

}  // namespace gevpnoise::chem
