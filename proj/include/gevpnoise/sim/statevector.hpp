#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/qop/pauli.hpp"

namespace gevpnoise::sim {

inline constexpr int kMaxStatevectorQubits = 24;

/// Normalized n-qubit state; basis index bit q is qubit q (1 = occupied
/// spin orbital under Jordan-Wigner).
class Statevector {
 public:
  Statevector() = default;
  Statevector(int n_qubits, ComplexVector amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > kMaxStatevectorQubits) throw DomainError("statevector qubit count out of range");
    if (amps_.size() != (Eigen::Index{1} << n_qubits)) throw SizeMismatch("amplitude count is not 2^n");
  }

  static Statevector basis_state(int n_qubits, std::uint64_t index) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n_qubits);
    if (index >= static_cast<std::uint64_t>(v.size())) throw DomainError("basis index out of range");
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return Statevector(n_qubits, std::move(v));
  }

  /// Normalizes `v`; throws when its norm is below `min_norm`.
  static Statevector normalized(int n_qubits, const ComplexVector& v, double min_norm = 1e-12) {
    const double nrm = v.norm();
    if (!(nrm > min_norm)) throw DomainError("cannot normalize a (near-)zero vector");
    return Statevector(n_qubits, v / nrm);
  }

  int n_qubits() const noexcept { return n_qubits_; }
  const ComplexVector& amplitudes() const noexcept { return amps_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  double norm() const { return amps_.norm(); }

 private:
  int n_qubits_ = 0;
  ComplexVector amps_;
};

namespace detail {

struct CompiledTerm {
  std::uint64_t x;
  std::uint64_t z;
  cplx coefficient;  // includes the i^{#Y} phase
};

inline std::vector<CompiledTerm> compile(const qop::PauliOperator& op) {
  std::vector<CompiledTerm> out;
  out.reserve(op.size());
  for (const auto& [p, c] : op.terms()) out.push_back({p.x, p.z, c * qop::i_pow(p.y_count())});
  return out;
}

// out += op * in
inline void apply_accumulate(const std::vector<CompiledTerm>& terms, const ComplexVector& in, ComplexVector& out) {
  const auto dim = static_cast<std::uint64_t>(in.size());
  for (const auto& t : terms) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const cplx a = in(static_cast<Eigen::Index>(b));
      if (a == cplx{0, 0}) continue;
      const cplx v = (std::popcount(b & t.z) & 1) ? -t.coefficient * a : t.coefficient * a;
      out(static_cast<Eigen::Index>(b ^ t.x)) += v;
    }
  }
}

}  // namespace detail

inline ComplexVector apply_pauli(const qop::PauliOperator& op, const ComplexVector& psi) {
  if (psi.size() != (Eigen::Index{1} << op.n_qubits())) throw SizeMismatch("apply_pauli: state size does not match operator");
  ComplexVector out = ComplexVector::Zero(psi.size());
  detail::apply_accumulate(detail::compile(op), psi, out);
  return out;
}

/// O|psi>, not normalized.
inline ComplexVector apply_pauli(const qop::PauliOperator& op, const Statevector& psi) {
  if (psi.n_qubits() != op.n_qubits()) throw SizeMismatch("apply_pauli: qubit count mismatch");
  return apply_pauli(op, psi.amplitudes());
}

/// <phi_i|O|phi_j>.
inline cplx transition_element(const Statevector& phi_i, const Statevector& phi_j, const qop::PauliOperator& op) {
  if (phi_i.n_qubits() != op.n_qubits() || phi_j.n_qubits() != op.n_qubits())
    throw SizeMismatch("transition_element: qubit count mismatch");
  return phi_i.amplitudes().dot(apply_pauli(op, phi_j.amplitudes()));
}

/// <psi|O|psi>.
inline cplx expectation(const Statevector& psi, const qop::PauliOperator& op) { return transition_element(psi, psi, op); }

/// <psi|P|psi> for a single Pauli string, real for normalized psi.
inline double string_expectation(const ComplexVector& psi, const qop::PauliString& p) {
  const auto dim = static_cast<std::uint64_t>(psi.size());
  cplx acc = 0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const cplx a = psi(static_cast<Eigen::Index>(b));
    if (a == cplx{0, 0}) continue;
    const cplx v = std::conj(psi(static_cast<Eigen::Index>(b ^ p.x))) * a;
    acc += (std::popcount(b & p.z) & 1) ? -v : v;
  }
  return (acc * qop::i_pow(p.y_count())).real();
}

}  // namespace gevpnoise::sim
