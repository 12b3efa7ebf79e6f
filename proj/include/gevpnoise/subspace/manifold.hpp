#pragma once

#include <set>
#include <vector>

#include "gevpnoise/qop/excitation.hpp"

namespace gevpnoise::subspace {

/// Ordered excitation operators spanning the subspace: Identity first when
/// included, then singles, then doubles.
struct ExcitationManifold {
  std::vector<qop::Excitation> ops;
  bool include_identity = false;
  qop::SpinPolicy spin_policy = qop::SpinPolicy::sz_conserving;

  std::size_t size() const noexcept { return ops.size(); }

  bool has_duplicates() const {
    std::set<qop::Excitation> seen(ops.begin(), ops.end());
    return seen.size() != ops.size();
  }
};

inline ExcitationManifold build_manifold(const qop::OrbitalSpace& space, qop::SpinPolicy policy, bool include_identity) {
  ExcitationManifold m;
  m.include_identity = include_identity;
  m.spin_policy = policy;
  if (include_identity) m.ops.push_back(qop::Excitation::identity());
  const auto ex = qop::enumerate_excitations(space, policy);
  m.ops.insert(m.ops.end(), ex.begin(), ex.end());
  return m;
}

inline std::vector<qop::PauliOperator> manifold_paulis(const ExcitationManifold& m, int n_qubits) {
  std::vector<qop::PauliOperator> out;
  out.reserve(m.size());
  for (const auto& e : m.ops) out.push_back(qop::excitation_to_pauli(e, n_qubits));
  return out;
}

}  // namespace gevpnoise::subspace
