#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/qop/pauli.hpp"

namespace gevpnoise::sim {

inline constexpr int kMaxExactQubits = 12;

/// Particle number and twice the spin projection (2·Sz, integer) in the
/// blocked spin-orbital ordering.
struct Sector {
  int n_particles = 0;
  int two_sz = 0;
};

inline int two_sz_of(std::uint64_t bits, int n_qubits) {
  const int m = n_qubits / 2;
  const std::uint64_t alpha_mask = (std::uint64_t{1} << m) - 1;
  return std::popcount(bits & alpha_mask) - std::popcount(bits & ~alpha_mask);
}

inline std::vector<std::uint64_t> sector_basis(int n_qubits, const Sector& sector) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n_qubits); ++b)
    if (std::popcount(b) == sector.n_particles && two_sz_of(b, n_qubits) == sector.two_sz) out.push_back(b);
  return out;
}

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns in the full 2^n basis; empty unless requested
};

/// Full dense diagonalization, optionally restricted to a (N, Sz) sector.
inline Spectrum exact_spectrum(const qop::PauliOperator& h, std::optional<Sector> sector = std::nullopt,
                               bool want_vectors = false) {
  if (!h.is_hermitian()) throw NonHermitian("exact_spectrum: operator is not Hermitian");
  const int n = h.n_qubits();
  if (n > kMaxExactQubits) throw DomainError("exact_spectrum: more than 12 qubits");
  const std::uint64_t full = std::uint64_t{1} << n;

  std::vector<std::uint64_t> basis;
  if (sector) {
    if (n % 2 != 0) throw DomainError("exact_spectrum: sector restriction needs an even qubit count");
    basis = sector_basis(n, *sector);
  } else {
    basis.resize(full);
    for (std::uint64_t b = 0; b < full; ++b) basis[b] = b;
  }
  Spectrum out;
  if (basis.empty()) return out;

  std::unordered_map<std::uint64_t, Eigen::Index> position;
  for (std::size_t k = 0; k < basis.size(); ++k) position[basis[k]] = static_cast<Eigen::Index>(k);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& [p, c] : h.terms()) {
    const cplx base = c * qop::i_pow(p.y_count());
    for (Eigen::Index col = 0; col < dim; ++col) {
      const std::uint64_t b = basis[static_cast<std::size_t>(col)];
      auto it = position.find(b ^ p.x);
      if (it == position.end()) continue;
      m(it->second, col) += (std::popcount(b & p.z) & 1) ? -base : base;
    }
  }
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  out.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + dim);
  if (want_vectors) {
    out.eigenvectors = ComplexMatrix::Zero(static_cast<Eigen::Index>(full), dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      out.eigenvectors.row(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(k)])) = eig.eigenvectors().row(k);
  }
  return out;
}

}  // namespace gevpnoise::sim
