#pragma once

#include <vector>

#include "gevpnoise/chem/integrals.hpp"
#include "gevpnoise/chem/rhf.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/qop/fermion.hpp"

namespace gevpnoise::qop {

/// Molecular-orbital integrals over spin orbitals.
///
/// Spin-orbital ordering is blocked: index p < m is spatial orbital p with α
/// spin, index p >= m is spatial orbital p - m with β spin (m = n_spatial).
///
/// Two-body convention: physicist, antisymmetrized,
///   two_body(p,q,r,s) = <pq||rs> = <pq|rs> - <pq|sr>,  <pq|rs> = (pr|qs),
/// so that H = Σ h_pq a†_p a_q + ¼ Σ <pq||rs> a†_p a†_q a_s a_r + core_energy.
struct SpinOrbitalIntegrals {
  std::size_t n_spin_orbitals = 0;
  RealMatrix one_body;
  std::vector<double> two_body;  // row-major n^4
  double core_energy = 0.0;

  std::size_t n_spatial() const noexcept { return n_spin_orbitals / 2; }
  bool is_beta(std::size_t p) const noexcept { return p >= n_spatial(); }
  std::size_t spatial(std::size_t p) const noexcept { return p % n_spatial(); }

  double two(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    const auto n = n_spin_orbitals;
    return two_body[((p * n + q) * n + r) * n + s];
  }
};

inline SpinOrbitalIntegrals spatial_to_spin(const chem::RhfResult& rhf, const chem::IntegralSet& ints) {
  const auto m = ints.n_ao;
  if (static_cast<std::size_t>(rhf.mo_coefficients.rows()) != m ||
      static_cast<std::size_t>(rhf.mo_coefficients.cols()) != m)
    throw SizeMismatch("spatial_to_spin: MO coefficient matrix does not match the AO basis");
  const RealMatrix& c = rhf.mo_coefficients;
  const RealMatrix h_mo = c.transpose() * ints.core_hamiltonian() * c;

  // (pq|rs) in the MO basis, four quarter transformations.
  const auto idx = [m](std::size_t a, std::size_t b, std::size_t cc, std::size_t d) { return ((a * m + b) * m + cc) * m + d; };
  std::vector<double> t1(m * m * m * m), t2(m * m * m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) t1[idx(a, b, k, l)] = ints.eri(a, b, k, l);
  for (int pass = 0; pass < 4; ++pass) {
    std::fill(t2.begin(), t2.end(), 0.0);
    // Contract the first index with C and rotate indices left: (a,b,k,l) -> (b,k,l,p).
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t l = 0; l < m; ++l) {
            const double v = t1[idx(a, b, k, l)];
            for (std::size_t p = 0; p < m; ++p) t2[idx(b, k, l, p)] += c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p)) * v;
          }
    std::swap(t1, t2);
  }
  const std::vector<double>& mo = t1;

  SpinOrbitalIntegrals out;
  const auto n = 2 * m;
  out.n_spin_orbitals = n;
  out.core_energy = ints.nuclear_repulsion;
  out.one_body = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if ((p >= m) == (q >= m))
        out.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
            h_mo(static_cast<Eigen::Index>(p % m), static_cast<Eigen::Index>(q % m));

  auto coulomb = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    // <pq|rs> = (pr|qs) with spin integration.
    if ((p >= m) != (r >= m) || (q >= m) != (s >= m)) return 0.0;
    return mo[idx(p % m, r % m, q % m, s % m)];
  };
  out.two_body.assign(n * n * n * n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          out.two_body[((p * n + q) * n + r) * n + s] = coulomb(p, q, r, s) - coulomb(p, q, s, r);
  return out;
}

/// Second-quantized molecular Hamiltonian (see SpinOrbitalIntegrals for the convention).
inline FermionOperator hamiltonian_fermionic(const SpinOrbitalIntegrals& so) {
  const auto n = so.n_spin_orbitals;
  if (static_cast<std::size_t>(so.one_body.rows()) != n || so.two_body.size() != n * n * n * n)
    throw SizeMismatch("hamiltonian_fermionic: inconsistent integral dimensions");
  constexpr double kSkip = 1e-14;
  FermionOperator h = FermionOperator::identity(so.core_energy);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const double v = so.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (std::abs(v) > kSkip) h.add({cre(static_cast<int>(p)), ann(static_cast<int>(q))}, v);
    }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = so.two(p, q, r, s);
          if (std::abs(v) > kSkip)
            h.add({cre(static_cast<int>(p)), cre(static_cast<int>(q)), ann(static_cast<int>(s)), ann(static_cast<int>(r))},
                  0.25 * v);
        }
  return h;
}

}  // namespace gevpnoise::qop
