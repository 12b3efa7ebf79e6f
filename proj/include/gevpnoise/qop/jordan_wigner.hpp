#pragma once

#include <string>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/qop/fermion.hpp"
#include "gevpnoise/qop/pauli.hpp"

namespace gevpnoise::qop {

/// JW image of one ladder operator:
///   a†_p = ½(X_p − iY_p) Z_{p−1}…Z_0,   a_p = ½(X_p + iY_p) Z_{p−1}…Z_0.
/// The parity string sits on the lower-index qubits; occupation 1 = bit set.
inline PauliOperator jordan_wigner(const Ladder& l, int n_qubits) {
  if (l.mode < 0 || l.mode >= n_qubits)
    throw DomainError("jordan_wigner: mode " + std::to_string(l.mode) + " outside " + std::to_string(n_qubits) + " qubits");
  const std::uint64_t bit = std::uint64_t{1} << l.mode;
  const std::uint64_t parity = bit - 1;
  const PauliString x{bit, parity};
  const PauliString y{bit, parity | bit};
  const cplx ycoef = l.create ? cplx{0, -0.5} : cplx{0, 0.5};
  return PauliOperator(n_qubits, {{x, 0.5}, {y, ycoef}});
}

inline PauliOperator jordan_wigner(const FermionOperator& op, int n_qubits) {
  std::vector<PauliOperator::Term> acc;
  for (const auto& [ops, c] : op.terms()) {
    PauliOperator term = PauliOperator::identity(n_qubits, c);
    for (const auto& l : ops) term = pauli_product(term, jordan_wigner(l, n_qubits));
    acc.insert(acc.end(), term.terms().begin(), term.terms().end());
  }
  return PauliOperator(n_qubits, std::move(acc));
}

}  // namespace gevpnoise::qop
