#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/qop/pauli.hpp"
#include "gevpnoise/sim/statevector.hpp"
#include "gevpnoise/sim/uccsd.hpp"
#include "gevpnoise/subspace/manifold.hpp"
#include "gevpnoise/subspace/matrices.hpp"
#include "gevpnoise/subspace/noise.hpp"
#include "gevpnoise/subspace/qse.hpp"
#include "gevpnoise/subspace/rng.hpp"

namespace gevpnoise::subspace {

enum class OffsetChoice { hf, vqe };

inline std::string to_string(OffsetChoice o) { return o == OffsetChoice::hf ? "hf" : "vqe"; }
inline OffsetChoice offset_choice_from_string(const std::string& s) {
  if (s == "hf" || s == "E_HF") return OffsetChoice::hf;
  if (s == "vqe" || s == "E_VQE") return OffsetChoice::vqe;
  throw FormatError("unknown offset choice '" + s + "'");
}

struct QsceomOptions {
  OffsetChoice offset = OffsetChoice::hf;
  bool include_ground_row = false;  // prepend U(θ)|HF> as basis vector 0
};

/// Unrotated basis G_J|HF> / ||G_J|HF>||, with |HF> first when requested.
/// Zero vectors are kept as-is when `allow_zero` is set.
inline std::vector<ComplexVector> qsceom_reference_basis(const sim::UccsdAnsatz& ansatz, const ExcitationManifold& manifold,
                                                         bool include_ground_row, bool allow_zero = false) {
  const int n = ansatz.n_qubits();
  const ComplexVector& hf = ansatz.reference.amplitudes();
  std::vector<ComplexVector> out;
  if (include_ground_row) out.push_back(hf);
  for (const auto& g : manifold_paulis(manifold, n)) {
    ComplexVector v = sim::apply_pauli(g, hf);
    const double nrm = v.norm();
    if (nrm > 1e-12) {
      v /= nrm;
    } else if (!allow_zero) {
      throw DomainError("q-sc-EOM: manifold operator annihilates the reference determinant");
    }
    out.push_back(std::move(v));
  }
  return out;
}

/// Rotated basis phi_J = U(θ) G_J|HF> / ||G_J|HF>||.
inline std::vector<ComplexVector> qsceom_basis(const sim::UccsdAnsatz& ansatz, const std::vector<double>& theta,
                                               const ExcitationManifold& manifold, bool include_ground_row) {
  auto basis = qsceom_reference_basis(ansatz, manifold, include_ground_row);
  for (auto& v : basis) v = ansatz.apply(theta, std::move(v));
  return basis;
}

inline void check_qsceom_manifold(const ExcitationManifold& manifold) {
  for (const auto& e : manifold.ops)
    if (e.kind == qop::Excitation::Kind::identity)
      throw DomainError("q-sc-EOM manifold must not contain the identity (use include_ground_row)");
  if (manifold.ops.empty()) throw DomainError("q-sc-EOM manifold is empty");
}

inline double qsceom_offset(const sim::UccsdAnsatz& ansatz, const std::vector<double>& theta, const qop::PauliOperator& h,
                            OffsetChoice choice) {
  if (choice == OffsetChoice::hf) return sim::expectation(ansatz.reference, h).real();
  return sim::expectation(ansatz.state(theta), h).real();
}

/// H_IJ = <phi_I|H|phi_J> - δ_IJ E_offset. The offset is stored in
/// energy_offset and not added back.
inline SubspaceMatrices qsceom_matrix_exact(const sim::UccsdAnsatz& ansatz, const std::vector<double>& theta,
                                            const ExcitationManifold& manifold, const qop::PauliOperator& h,
                                            const QsceomOptions& options = {}) {
  if (h.n_qubits() != ansatz.n_qubits()) throw SizeMismatch("qsceom_matrix_exact: qubit count mismatch");
  check_qsceom_manifold(manifold);
  const auto basis = qsceom_basis(ansatz, theta, manifold, options.include_ground_row);
  const double offset = qsceom_offset(ansatz, theta, h, options.offset);
  const auto d = static_cast<Eigen::Index>(basis.size());
  std::vector<ComplexVector> hb;
  hb.reserve(basis.size());
  for (const auto& v : basis) hb.push_back(sim::apply_pauli(h, v));
  ComplexMatrix hm(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      hm(i, j) = basis[static_cast<std::size_t>(i)].dot(hb[static_cast<std::size_t>(j)]);
  hm = hermitian_part(hm);
  hm.diagonal().array() -= offset;

  SubspaceMatrices out;
  out.h = hm;
  out.method = Method::qsceom;
  out.manifold_policy = qop::to_string(manifold.spin_policy);
  out.energy_offset = offset;
  return out;
}

/// max |S - I| for S_IJ = <phi_I|phi_J>, evaluated with U(θ) applied explicitly.
/// Operators that annihilate |HF> contribute a zero vector (deviation 1).
inline double verify_identity_overlap(const sim::UccsdAnsatz& ansatz, const std::vector<double>& theta,
                                      const ExcitationManifold& manifold, bool include_ground_row = false) {
  auto basis = qsceom_reference_basis(ansatz, manifold, include_ground_row, true);
  for (auto& v : basis) v = ansatz.apply(theta, std::move(v));
  double dev = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx s = basis[i].dot(basis[j]);
      dev = std::max(dev, std::abs(s - cplx(i == j ? 1.0 : 0.0, 0.0)));
    }
  return dev;
}

/// Hermitian observable H measured on a fixed state: exact expectations of
/// each non-identity Pauli term, identity part kept as a constant.
inline Decomposition measure_on(const qop::PauliOperator& h, const ComplexVector& psi) {
  Decomposition d;
  for (const auto& [p, c] : h.terms()) {
    if (p.is_identity()) {
      d.constant += c.real();
      continue;
    }
    d.terms.push_back({c.real(), sim::string_expectation(psi, p)});
  }
  return d;
}

/// Exact per-term expectations needed to sample the q-sc-EOM matrix:
/// <phi_I|H|phi_I> on the diagonal and <±|H|±> with |±> = (phi_I ± phi_J)/√2.
struct QsceomSamplingPlan {
  Eigen::Index dim = 0;
  std::string manifold_policy;
  double offset = 0.0;
  std::vector<Decomposition> diag;         // size dim
  std::vector<Decomposition> plus, minus;  // row-major strict upper triangle

  static std::size_t index(Eigen::Index i, Eigen::Index j, Eigen::Index dim) {
    return static_cast<std::size_t>(i * (2 * dim - i - 1) / 2 + (j - i - 1));
  }
};

inline QsceomSamplingPlan build_qsceom_plan(const sim::UccsdAnsatz& ansatz, const std::vector<double>& theta,
                                            const ExcitationManifold& manifold, const qop::PauliOperator& h,
                                            const QsceomOptions& options = {}) {
  if (h.n_qubits() != ansatz.n_qubits()) throw SizeMismatch("build_qsceom_plan: qubit count mismatch");
  if (!h.is_hermitian()) throw NonHermitian("build_qsceom_plan: Hamiltonian is not Hermitian");
  check_qsceom_manifold(manifold);
  const auto basis = qsceom_basis(ansatz, theta, manifold, options.include_ground_row);
  QsceomSamplingPlan plan;
  plan.dim = static_cast<Eigen::Index>(basis.size());
  plan.manifold_policy = qop::to_string(manifold.spin_policy);
  plan.offset = qsceom_offset(ansatz, theta, h, options.offset);
  for (const auto& v : basis) plan.diag.push_back(measure_on(h, v));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < plan.dim; ++i)
    for (Eigen::Index j = i + 1; j < plan.dim; ++j) {
      const auto& a = basis[static_cast<std::size_t>(i)];
      const auto& b = basis[static_cast<std::size_t>(j)];
      const ComplexVector p = r * (a + b);
      const ComplexVector m = r * (a - b);
      if (std::abs(p.norm() - 1.0) > 1e-8 || std::abs(m.norm() - 1.0) > 1e-8)
        throw Error("build_qsceom_plan: q-sc-EOM basis is not orthonormal");
      plan.plus.push_back(measure_on(h, p));
      plan.minus.push_back(measure_on(h, m));
    }
  return plan;
}

/// One sampled element H_IJ (offset removed on the diagonal).
inline double sample_qsceom_element(const QsceomSamplingPlan& plan, const ShotNoiseModel& noise, std::uint64_t rep,
                                    Eigen::Index i, Eigen::Index j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= plan.dim) throw DomainError("sample_qsceom_element: index out of range");
  const auto shots = static_cast<std::uint64_t>(noise.shots_per_pauli_term);
  const auto ui = static_cast<std::uint64_t>(i), uj = static_cast<std::uint64_t>(j);
  if (i == j) {
    auto rng = make_stream(noise.seed, {rep, shots, detail::kDiag, ui, ui});
    return sample_decomposition(plan.diag[static_cast<std::size_t>(i)], noise, rng) - plan.offset;
  }
  const auto k = QsceomSamplingPlan::index(i, j, plan.dim);
  auto rp = make_stream(noise.seed, {rep, shots, detail::kPlus, ui, uj});
  auto rm = make_stream(noise.seed, {rep, shots, detail::kMinus, ui, uj});
  const double ep = sample_decomposition(plan.plus[k], noise, rp);
  const double em = sample_decomposition(plan.minus[k], noise, rm);
  return 0.5 * (ep - em);
}

/// Shot-sampled q-sc-EOM matrix for repetition `rep`. Imaginary parts are zero.
inline SubspaceMatrices sample_qsceom(const QsceomSamplingPlan& plan, const ShotNoiseModel& noise, std::uint64_t rep) {
  const auto d = plan.dim;
  ComplexMatrix hm = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) hm(i, j) = hm(j, i) = sample_qsceom_element(plan, noise, rep, i, j);
  SubspaceMatrices out;
  out.h = hm;
  out.method = Method::qsceom;
  out.manifold_policy = plan.manifold_policy;
  out.energy_offset = plan.offset;
  out.provenance = {true, noise.shots_per_pauli_term, to_string(noise.kind), noise.seed};
  return out;
}

inline SubspaceMatrices qsceom_matrix_sampled(const sim::UccsdAnsatz& ansatz, const std::vector<double>& theta,
                                              const ExcitationManifold& manifold, const qop::PauliOperator& h,
                                              const ShotNoiseModel& noise, const QsceomOptions& options = {}) {
  return sample_qsceom(build_qsceom_plan(ansatz, theta, manifold, h, options), noise, 0);
}

}  // namespace gevpnoise::subspace
