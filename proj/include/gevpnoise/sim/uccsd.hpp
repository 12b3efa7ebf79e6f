#pragma once

#include <cstdint>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/qop/excitation.hpp"
#include "gevpnoise/sim/exponential.hpp"
#include "gevpnoise/sim/statevector.hpp"

namespace gevpnoise::sim {

enum class SpinOrdering { blocked, interleaved };

/// Occupation bitmask of the closed-shell determinant. Blocked: α qubits
/// 0..n/2-1, β qubits n/2..n-1, each filled from the bottom (an odd count puts
/// the extra electron in α). Interleaved: qubits 0..count-1.
inline std::uint64_t hartree_fock_bits(int n_qubits, int n_occupied, SpinOrdering ordering = SpinOrdering::blocked) {
  if (n_occupied < 0 || n_occupied > n_qubits) throw DomainError("hartree_fock_state: more electrons than spin orbitals");
  if (ordering == SpinOrdering::interleaved) return n_occupied == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_occupied) - 1;
  if (n_qubits % 2 != 0) throw DomainError("hartree_fock_state: blocked ordering needs an even qubit count");
  const int m = n_qubits / 2;
  const int n_alpha = (n_occupied + 1) / 2;
  const int n_beta = n_occupied / 2;
  if (n_alpha > m) throw DomainError("hartree_fock_state: too many electrons for blocked ordering");
  std::uint64_t bits = 0;
  for (int k = 0; k < n_alpha; ++k) bits |= std::uint64_t{1} << k;
  for (int k = 0; k < n_beta; ++k) bits |= std::uint64_t{1} << (m + k);
  return bits;
}

inline Statevector hartree_fock_state(int n_qubits, int n_occupied, SpinOrdering ordering = SpinOrdering::blocked) {
  return Statevector::basis_state(n_qubits, hartree_fock_bits(n_qubits, n_occupied, ordering));
}

/// Disentangled UCCSD: U(θ) = exp(θ_{K-1} τ_{K-1}) ··· exp(θ_0 τ_0), with
/// τ_k = G_k − G_k† and generator 0 applied to the reference first.
struct UccsdAnsatz {
  qop::OrbitalSpace space;
  qop::SpinPolicy policy = qop::SpinPolicy::sz_conserving;
  std::vector<qop::Excitation> excitations;
  std::vector<qop::PauliOperator> generators;
  std::vector<PauliExponential> exponentials;
  Statevector reference;
  std::vector<double> theta;

  int n_qubits() const noexcept { return space.n_qubits(); }
  std::size_t n_parameters() const noexcept { return generators.size(); }

  ComplexVector apply(const std::vector<double>& params, ComplexVector v) const {
    if (params.size() != generators.size()) throw SizeMismatch("UCCSD: parameter count differs from generator count");
    for (std::size_t k = 0; k < exponentials.size(); ++k) v = exponentials[k].apply(params[k], std::move(v));
    return v;
  }
  ComplexVector apply_adjoint(const std::vector<double>& params, ComplexVector v) const {
    if (params.size() != generators.size()) throw SizeMismatch("UCCSD: parameter count differs from generator count");
    for (std::size_t k = exponentials.size(); k-- > 0;) v = exponentials[k].apply(-params[k], std::move(v));
    return v;
  }

  Statevector state(const std::vector<double>& params) const {
    return Statevector(n_qubits(), apply(params, reference.amplitudes()));
  }
  Statevector state() const { return state(theta); }
};

inline UccsdAnsatz build_uccsd(const qop::OrbitalSpace& space, qop::SpinPolicy policy) {
  UccsdAnsatz ansatz;
  ansatz.space = space;
  ansatz.policy = policy;
  ansatz.excitations = qop::enumerate_excitations(space, policy);
  if (ansatz.excitations.empty()) throw DomainError("build_uccsd: empty excitation manifold");
  const int n = space.n_qubits();
  for (const auto& e : ansatz.excitations) {
    const auto g = qop::excitation_to_pauli(e, n);
    ansatz.generators.push_back(g - g.adjoint());
    ansatz.exponentials.emplace_back(ansatz.generators.back());
  }
  ansatz.reference = hartree_fock_state(n, 2 * space.n_occ);
  ansatz.theta.assign(ansatz.generators.size(), 0.0);
  return ansatz;
}

}  // namespace gevpnoise::sim
