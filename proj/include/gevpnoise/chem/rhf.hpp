#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gevpnoise/chem/integrals.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"

namespace gevpnoise::chem {

struct ScfConfig {
  int max_iterations = 200;
  double energy_tolerance = 1e-10;
  double density_tolerance = 1e-8;
  // Density mixing factor once the energy starts oscillating; 0 disables damping.
  double damping = 0.5;
  // If the energy keeps rising this many times while damped, the unmixed
  // fraction (1 - damping) is halved.
  int escalate_after = 10;
  // Pulay DIIS subspace size for the fallback run when damped iterations fail; 0 disables it.
  int diis_size = 8;
};

struct RhfResult {
  RealMatrix mo_coefficients;  // columns are MOs, AO -> MO
  RealVector orbital_energies;
  double total_energy = 0.0;
  std::size_t n_occupied = 0;
  int iterations = 0;
  bool damped = false;
  std::vector<double> energy_trace;
  bool diis = false;

  RealMatrix density() const {
    const auto occ = mo_coefficients.leftCols(static_cast<Eigen::Index>(n_occupied));
    return 2.0 * occ * occ.transpose();
  }
};

namespace detail {

inline RealMatrix two_electron_fock(const IntegralSet& ints, const RealMatrix& density) {
  const auto n = ints.n_ao;
  RealMatrix g = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          v += density(k, l) * (ints.eri(i, j, k, l) - 0.5 * ints.eri(i, k, j, l));
      g(i, j) = v;
    }
  return g;
}

// Largest-magnitude coefficient of each column made positive; the first index wins ties.
inline void fix_phases(RealMatrix& c) {
  for (Eigen::Index col = 0; col < c.cols(); ++col) {
    Eigen::Index best = 0;
    for (Eigen::Index row = 1; row < c.rows(); ++row)
      if (std::abs(c(row, col)) > std::abs(c(best, col)) + 1e-12) best = row;
    if (c(best, col) < 0) c.col(col) *= -1.0;
  }
}

}  // namespace detail

/// Closed-shell Roothaan iterations. The initial density puts one electron in
/// every hydrogen 1s function (superposition of atomic densities). Damped
/// iterations run first; if they fail, DIIS restarts from the same guess.
inline RhfResult run_rhf(const IntegralSet& ints, int n_electrons, const ScfConfig& config = {}) {
  if (n_electrons <= 0 || n_electrons % 2 != 0) throw DomainError("run_rhf: electron count must be positive and even");
  const auto n_occ = static_cast<std::size_t>(n_electrons / 2);
  if (n_occ > ints.n_ao) throw DomainError("run_rhf: more occupied orbitals than basis functions");

  const RealMatrix hcore = ints.core_hamiltonian();

  // Canonical orthogonalization X = U s^{-1/2}.
  Eigen::SelfAdjointEigenSolver<RealMatrix> s_eig(ints.overlap);
  if (s_eig.eigenvalues().minCoeff() <= 1e-10) throw DegenerateGeometry("overlap matrix is singular");
  const RealMatrix x = s_eig.eigenvectors() * s_eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal();

  auto diagonalize = [&](const RealMatrix& fock, RealMatrix& coeffs, RealVector& energies) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(x.transpose() * fock * x);
    coeffs = x * eig.eigenvectors();
    energies = eig.eigenvalues();
  };
  auto density_of = [&](const RealMatrix& coeffs) -> RealMatrix {
    const auto occ = coeffs.leftCols(static_cast<Eigen::Index>(n_occ));
    return 2.0 * occ * occ.transpose();
  };

  auto converged = [&](RealMatrix density, int iter, bool damped, bool diis, std::vector<double> trace) {
    // Orbitals and energy from the converged density.
    RealMatrix coeffs;
    RealVector energies;
    diagonalize(hcore + detail::two_electron_fock(ints, density), coeffs, energies);
    detail::fix_phases(coeffs);
    const RealMatrix p = density_of(coeffs);
    RhfResult out;
    out.n_occupied = n_occ;
    out.mo_coefficients = coeffs;
    out.orbital_energies = energies;
    out.total_energy = 0.5 * (p.cwiseProduct(hcore + hcore + detail::two_electron_fock(ints, p))).sum() + ints.nuclear_repulsion;
    out.iterations = iter;
    out.damped = damped;
    out.diis = diis;
    out.energy_trace = std::move(trace);
    return out;
  };
  const RealMatrix sad = RealMatrix::Identity(hcore.rows(), hcore.cols()) * (static_cast<double>(n_electrons) / hcore.rows());

  std::vector<double> trace;
  {
    RealMatrix coeffs;
    RealVector energies;
    RealMatrix density = sad;
    bool damping = false;
    double mix = config.damping;
    int rises = 0;
    double previous_energy = 0.0;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
      const RealMatrix fock = hcore + detail::two_electron_fock(ints, density);
      const double energy = 0.5 * (density.cwiseProduct(hcore + fock)).sum() + ints.nuclear_repulsion;
      trace.push_back(energy);

      diagonalize(fock, coeffs, energies);
      RealMatrix next = density_of(coeffs);
      if (iter > 1 && energy > previous_energy + 1e-12 && config.damping > 0) {
        if (damping && ++rises % config.escalate_after == 0) mix = 1.0 - 0.5 * (1.0 - mix);
        damping = true;
      }
      if (damping) next = (1.0 - mix) * next + mix * density;

      const double d_energy = iter > 1 ? std::abs(energy - previous_energy) : INFINITY;
      const double d_density = (next - density).cwiseAbs().maxCoeff();
      density = next;
      previous_energy = energy;
      if (d_energy < config.energy_tolerance && d_density < config.density_tolerance)
        return converged(density, iter, damping, false, std::move(trace));
    }
  }

  if (config.diis_size > 0) {
    // Pulay extrapolation of the Fock matrix with error FDS - SDF.
    const RealMatrix& s_ao = ints.overlap;
    std::vector<RealMatrix> focks, errors;
    RealMatrix density = sad;
    RealMatrix coeffs;
    RealVector energies;
    double previous_energy = 0.0;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
      const RealMatrix fock = hcore + detail::two_electron_fock(ints, density);
      const double energy = 0.5 * (density.cwiseProduct(hcore + fock)).sum() + ints.nuclear_repulsion;
      trace.push_back(energy);
      const RealMatrix err = x.transpose() * (fock * density * s_ao - s_ao * density * fock) * x;
      focks.push_back(fock);
      errors.push_back(err);
      if (static_cast<int>(focks.size()) > config.diis_size) {
        focks.erase(focks.begin());
        errors.erase(errors.begin());
      }
      const auto m = static_cast<Eigen::Index>(focks.size());
      RealMatrix b = RealMatrix::Zero(m + 1, m + 1);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          b(i, j) = errors[static_cast<std::size_t>(i)].cwiseProduct(errors[static_cast<std::size_t>(j)]).sum();
      b.row(m).head(m).setConstant(-1.0);
      b.col(m).head(m).setConstant(-1.0);
      RealVector rhs = RealVector::Zero(m + 1);
      rhs(m) = -1.0;
      const RealVector w = b.completeOrthogonalDecomposition().solve(rhs);
      RealMatrix extrapolated = RealMatrix::Zero(fock.rows(), fock.cols());
      for (Eigen::Index i = 0; i < m; ++i) extrapolated += w(i) * focks[static_cast<std::size_t>(i)];
      if (!extrapolated.allFinite()) extrapolated = fock;

      diagonalize(extrapolated, coeffs, energies);
      const RealMatrix next = density_of(coeffs);
      const double d_energy = iter > 1 ? std::abs(energy - previous_energy) : INFINITY;
      const double d_density = (next - density).cwiseAbs().maxCoeff();
      density = next;
      previous_energy = energy;
      if (d_energy < config.energy_tolerance && d_density < config.density_tolerance && err.cwiseAbs().maxCoeff() < 1e-6)
        return converged(density, iter, false, true, std::move(trace));
    }
  }
  throw ConvergenceError("run_rhf: SCF did not converge in " + std::to_string(config.max_iterations) + " iterations",
                         trace);
}

}  // namespace gevpnoise::chem
