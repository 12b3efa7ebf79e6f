#pragma once

#include <cmath>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/qop/pauli.hpp"
#include "gevpnoise/sim/statevector.hpp"

namespace gevpnoise::sim {

/// exp(theta * tau) acting on vectors for a fixed anti-Hermitian Pauli sum tau.
/// Truncated Taylor series with scaling: the step is chosen so that
/// |step| * ||tau||_1 <= 0.5, and each step is summed until terms drop below
/// 1e-17 relative to the vector norm.
class PauliExponential {
 public:
  PauliExponential() = default;
  explicit PauliExponential(const qop::PauliOperator& generator)
      : n_qubits_(generator.n_qubits()), terms_(detail::compile(generator)), one_norm_(generator.one_norm()) {
    if (!generator.is_anti_hermitian()) throw NonHermitian("apply_exponential: generator is not anti-Hermitian");
  }

  int n_qubits() const noexcept { return n_qubits_; }

  ComplexVector apply(double theta, ComplexVector v) const {
    if (theta == 0.0 || terms_.empty()) return v;
    const double bound = std::abs(theta) * one_norm_;
    const int steps = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
    const double h = theta / steps;
    ComplexVector term(v.size());
    ComplexVector next(v.size());
    for (int s = 0; s < steps; ++s) {
      term = v;
      const double scale = v.norm();
      for (int k = 1; k <= 60; ++k) {
        next.setZero();
        detail::apply_accumulate(terms_, term, next);
        next *= h / k;
        term.swap(next);
        v += term;
        if (term.norm() <= 1e-17 * scale) break;
      }
    }
    return v;
  }

 private:
  int n_qubits_ = 0;
  std::vector<detail::CompiledTerm> terms_;
  double one_norm_ = 0.0;
};

/// exp(theta * generator)|psi> for an anti-Hermitian generator.
inline Statevector apply_exponential(const qop::PauliOperator& generator, double theta, const Statevector& psi) {
  if (generator.n_qubits() != psi.n_qubits()) throw SizeMismatch("apply_exponential: qubit count mismatch");
  const PauliExponential exp_op(generator);
  return Statevector(psi.n_qubits(), exp_op.apply(theta, psi.amplitudes()));
}

}  // namespace gevpnoise::sim
