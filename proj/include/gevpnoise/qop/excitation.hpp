#pragma once

#include <compare>
#include <string>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/qop/fermion.hpp"
#include "gevpnoise/qop/jordan_wigner.hpp"

namespace gevpnoise::qop {

enum class SpinPolicy { sz_conserving, unrestricted };

inline std::string to_string(SpinPolicy p) { return p == SpinPolicy::sz_conserving ? "sz_conserving" : "unrestricted"; }
inline SpinPolicy spin_policy_from_string(const std::string& s) {
  if (s == "sz_conserving") return SpinPolicy::sz_conserving;
  if (s == "unrestricted") return SpinPolicy::unrestricted;
  throw FormatError("unknown spin policy '" + s + "'");
}

/// Identity, a†_a a_i, or a†_a a†_b a_j a_i over spin-orbital indices.
struct Excitation {
  enum class Kind { identity, single, double_ };
  Kind kind = Kind::identity;
  int i = -1, j = -1, a = -1, b = -1;

  static Excitation identity() { return {}; }
  static Excitation single(int i, int a) { return {Kind::single, i, -1, a, -1}; }
  static Excitation double_(int i, int j, int a, int b) {
    if (i >= j || a >= b) throw DomainError("double excitation indices must satisfy i<j, a<b");
    return {Kind::double_, i, j, a, b};
  }

  auto operator<=>(const Excitation&) const = default;

  FermionOperator fermion() const {
    switch (kind) {
      case Kind::identity: return FermionOperator::identity();
      case Kind::single: return FermionOperator::product({cre(a), ann(i)});
      default: return FermionOperator::product({cre(a), cre(b), ann(j), ann(i)});
    }
  }

  std::string label() const {
    switch (kind) {
      case Kind::identity: return "I";
      case Kind::single: return "S(" + std::to_string(i) + "->" + std::to_string(a) + ")";
      default:
        return "D(" + std::to_string(i) + "," + std::to_string(j) + "->" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
  }
};

/// Occupied/virtual spin-orbital layout for a closed-shell reference in the
/// blocked ordering: α orbitals 0..m-1 then β orbitals m..2m-1, with the
/// lowest `n_occ` spatial orbitals of each spin occupied.
struct OrbitalSpace {
  int n_occ = 0;   // occupied spatial orbitals
  int n_virt = 0;  // virtual spatial orbitals

  int n_spatial() const noexcept { return n_occ + n_virt; }
  int n_qubits() const noexcept { return 2 * n_spatial(); }
  int spin(int p) const noexcept { return p >= n_spatial() ? 1 : 0; }

  std::vector<int> occupied() const {
    std::vector<int> out;
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < n_occ; ++k) out.push_back(s * n_spatial() + k);
    return out;
  }
  std::vector<int> virtuals() const {
    std::vector<int> out;
    for (int s = 0; s < 2; ++s)
      for (int k = n_occ; k < n_spatial(); ++k) out.push_back(s * n_spatial() + k);
    return out;
  }
};

/// Singles (lexicographic in (i,a)) followed by doubles (lexicographic in
/// (i,j,a,b), i<j, a<b). With sz_conserving, the spin projection is preserved.
inline std::vector<Excitation> enumerate_excitations(const OrbitalSpace& space, SpinPolicy policy) {
  if (space.n_occ <= 0 || space.n_virt <= 0) throw DomainError("excitations need occupied and virtual orbitals");
  const auto occ = space.occupied();
  const auto virt = space.virtuals();
  const bool sz = policy == SpinPolicy::sz_conserving;
  std::vector<Excitation> out;
  for (int i : occ)
    for (int a : virt)
      if (!sz || space.spin(i) == space.spin(a)) out.push_back(Excitation::single(i, a));
  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y)
      for (std::size_t u = 0; u < virt.size(); ++u)
        for (std::size_t v = u + 1; v < virt.size(); ++v) {
          const int i = occ[x], j = occ[y], a = virt[u], b = virt[v];
          if (!sz || space.spin(i) + space.spin(j) == space.spin(a) + space.spin(b))
            out.push_back(Excitation::double_(i, j, a, b));
        }
  return out;
}

inline PauliOperator excitation_to_pauli(const Excitation& e, int n_qubits) {
  return jordan_wigner(e.fermion(), n_qubits);
}

}  // namespace gevpnoise::qop
