#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "gevpnoise/chem/basis.hpp"
#include "gevpnoise/chem/boys.hpp"
#include "gevpnoise/chem/geometry.hpp"
#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/linalg.hpp"

namespace gevpnoise::chem {

/// Two-electron integrals (ij|kl) in chemist notation, stored once per
/// 8-fold permutation class.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(std::size_t n) : n_(n), data_(packed_size(n), 0.0) {}

  std::size_t dim() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[index(i, j, k, l)];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) { data_[index(i, j, k, l)] = v; }

  std::size_t stored_values() const noexcept { return data_.size(); }

 private:
  static std::size_t pair(std::size_t a, std::size_t b) { return a >= b ? a * (a + 1) / 2 + b : b * (b + 1) / 2 + a; }
  static std::size_t index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) { return pair(pair(i, j), pair(k, l)); }
  static std::size_t packed_size(std::size_t n) {
    const std::size_t np = n * (n + 1) / 2;
    return np * (np + 1) / 2;
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct IntegralSet {
  std::size_t n_ao = 0;
  RealMatrix overlap;
  RealMatrix kinetic;
  RealMatrix nuclear_attraction;
  EriTensor eri;
  double nuclear_repulsion = 0.0;

  RealMatrix core_hamiltonian() const { return kinetic + nuclear_attraction; }
};

namespace detail {

inline double prim_norm(double a) { return std::pow(2.0 * a / std::numbers::pi, 0.75); }

inline double prim_kinetic(double a, const Vec3& A, double b, const Vec3& B) {
  const double p = a + b;
  const double mu = a * b / p;
  const double r2 = (A - B).squaredNorm();
  return prim_norm(a) * prim_norm(b) * mu * (3.0 - 2.0 * mu * r2) * std::pow(std::numbers::pi / p, 1.5) *
         std::exp(-mu * r2);
}

inline double prim_nuclear(double a, const Vec3& A, double b, const Vec3& B, const Vec3& C, double charge) {
  const double p = a + b;
  const Vec3 P = (a * A + b * B) / p;
  return -prim_norm(a) * prim_norm(b) * charge * 2.0 * std::numbers::pi / p *
         std::exp(-a * b / p * (A - B).squaredNorm()) * boys_f0(p * (P - C).squaredNorm());
}

inline double prim_eri(double a, const Vec3& A, double b, const Vec3& B, double c, const Vec3& C, double d,
                       const Vec3& D) {
  const double p = a + b;
  const double q = c + d;
  const Vec3 P = (a * A + b * B) / p;
  const Vec3 Q = (c * C + d * D) / q;
  const double pre = 2.0 * std::pow(std::numbers::pi, 2.5) / (p * q * std::sqrt(p + q));
  return prim_norm(a) * prim_norm(b) * prim_norm(c) * prim_norm(d) * pre *
         std::exp(-a * b / p * (A - B).squaredNorm() - c * d / q * (C - D).squaredNorm()) *
         boys_f0(p * q / (p + q) * (P - Q).squaredNorm());
}

}  // namespace detail

/// One- and two-electron integrals over contracted s functions; `nuclei` are
/// unit-charge centers in Bohr. Works for any number of centers, including one.
inline IntegralSet build_integrals(const std::vector<BasisShell>& shells, const std::vector<Vec3>& nuclei) {
  const std::size_t n = shells.size();
  for (std::size_t i = 0; i < nuclei.size(); ++i)
    for (std::size_t j = i + 1; j < nuclei.size(); ++j)
      if ((nuclei[i] - nuclei[j]).norm() < Geometry::kMinSeparation * units::kAngstromToBohr)
        throw DegenerateGeometry("overlapping atoms");

  IntegralSet out;
  out.n_ao = n;
  out.overlap = RealMatrix::Zero(n, n);
  out.kinetic = RealMatrix::Zero(n, n);
  out.nuclear_attraction = RealMatrix::Zero(n, n);
  out.eri = EriTensor(n);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0, t = 0, v = 0;
      for (const auto& pa : shells[i].primitives)
        for (const auto& pb : shells[j].primitives) {
          const double cc = pa.coefficient * pb.coefficient;
          s += cc * primitive_overlap(pa.exponent, shells[i].center, pb.exponent, shells[j].center);
          t += cc * detail::prim_kinetic(pa.exponent, shells[i].center, pb.exponent, shells[j].center);
          for (const auto& C : nuclei)
            v += cc * detail::prim_nuclear(pa.exponent, shells[i].center, pb.exponent, shells[j].center, C, 1.0);
        }
      out.overlap(i, j) = out.overlap(j, i) = s;
      out.kinetic(i, j) = out.kinetic(j, i) = t;
      out.nuclear_attraction(i, j) = out.nuclear_attraction(j, i) = v;
    }

  // Loop over canonical quartets only (i>=j, k>=l, ij>=kl).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k <= i; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          double g = 0;
          for (const auto& pa : shells[i].primitives)
            for (const auto& pb : shells[j].primitives)
              for (const auto& pc : shells[k].primitives)
                for (const auto& pd : shells[l].primitives)
                  g += pa.coefficient * pb.coefficient * pc.coefficient * pd.coefficient *
                       detail::prim_eri(pa.exponent, shells[i].center, pb.exponent, shells[j].center, pc.exponent,
                                        shells[k].center, pd.exponent, shells[l].center);
          out.eri.set(i, j, k, l, g);
        }

  for (std::size_t a = 0; a < nuclei.size(); ++a)
    for (std::size_t b = a + 1; b < nuclei.size(); ++b) out.nuclear_repulsion += 1.0 / (nuclei[a] - nuclei[b]).norm();
  return out;
}

/// STO-3G (or other library) integrals for a hydrogen geometry.
inline IntegralSet build_integrals(const Geometry& geometry, const BasisLibrary& library) {
  std::vector<Vec3> nuclei;
  for (const auto& atom : geometry.atoms())
    nuclei.emplace_back(Vec3(atom.position[0], atom.position[1], atom.position[2]) * units::kAngstromToBohr);
  return build_integrals(library.shells_for(geometry), nuclei);
}

inline IntegralSet build_integrals(const Geometry& geometry) { return build_integrals(geometry, BasisLibrary::sto3g()); }

}  // namespace gevpnoise::chem
