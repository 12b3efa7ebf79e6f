#pragma once

#include <optional>
#include <vector>

#include "gevpnoise/chem/geometry.hpp"
#include "gevpnoise/chem/integrals.hpp"
#include "gevpnoise/chem/rhf.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/qop/excitation.hpp"
#include "gevpnoise/qop/hamiltonian.hpp"
#include "gevpnoise/qop/jordan_wigner.hpp"
#include "gevpnoise/sim/exact.hpp"
#include "gevpnoise/sim/uccsd.hpp"
#include "gevpnoise/sim/vqe.hpp"

namespace gevpnoise::experiment {

/// Qubit Hamiltonian and orbital layout for one closed-shell hydrogen geometry.
struct MolecularSystem {
  chem::Geometry geometry;
  chem::IntegralSet integrals;
  chem::RhfResult rhf;
  qop::PauliOperator hamiltonian;
  qop::OrbitalSpace space;
  int n_electrons = 0;

  int n_qubits() const noexcept { return hamiltonian.n_qubits(); }
  sim::Sector ground_sector() const { return {n_electrons, 0}; }
};

inline MolecularSystem build_system(const chem::Geometry& geometry, const chem::ScfConfig& scf = {}) {
  MolecularSystem s{geometry, chem::build_integrals(geometry), {}, {}, {}, geometry.total_nuclear_charge()};
  if (s.n_electrons % 2 != 0) throw DomainError("build_system: closed-shell reference needs an even electron count");
  s.rhf = chem::run_rhf(s.integrals, s.n_electrons, scf);
  const auto so = qop::spatial_to_spin(s.rhf, s.integrals);
  const int n = static_cast<int>(so.n_spin_orbitals);
  s.hamiltonian = qop::jordan_wigner(qop::hamiltonian_fermionic(so), n);
  s.space = {s.n_electrons / 2, n / 2 - s.n_electrons / 2};
  return s;
}

/// Converged UCCSD ground state. The ansatz always uses Sz-conserving
/// excitations.
struct GroundState {
  sim::UccsdAnsatz ansatz;
  sim::VqeResult vqe;
  sim::Statevector psi;
  double e_hf = 0.0;

  const std::vector<double>& theta() const noexcept { return vqe.theta_star; }
};

inline GroundState solve_ground_state(const MolecularSystem& system, const sim::VqeConfig& config = {}) {
  GroundState g;
  g.ansatz = sim::build_uccsd(system.space, qop::SpinPolicy::sz_conserving);
  g.e_hf = sim::expectation(g.ansatz.reference, system.hamiltonian).real();
  g.vqe = sim::vqe_minimize(g.ansatz, system.hamiltonian, config);
  g.ansatz.theta = g.vqe.theta_star;
  g.psi = g.ansatz.state();
  return g;
}

/// Exact eigenvalues of the (N, Sz = 0) sector.
inline std::vector<double> reference_spectrum(const MolecularSystem& system) {
  return sim::exact_spectrum(system.hamiltonian, system.ground_sector()).eigenvalues;
}

}  // namespace gevpnoise::experiment
