#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/qop/pauli.hpp"
#include "gevpnoise/sim/statevector.hpp"
#include "gevpnoise/subspace/manifold.hpp"
#include "gevpnoise/subspace/matrices.hpp"
#include "gevpnoise/subspace/noise.hpp"
#include "gevpnoise/subspace/rng.hpp"

namespace gevpnoise::subspace {

/// Memoized <psi|P|psi> per Pauli string for one fixed state.
class ExpectationCache {
 public:
  explicit ExpectationCache(const sim::Statevector& psi) : psi_(psi) {}

  double operator()(const qop::PauliString& p) {
    const auto key = Key{p.x, p.z};
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    const double v = sim::string_expectation(psi_.amplitudes(), p);
    values_.emplace(key, v);
    return v;
  }

  std::size_t size() const noexcept { return values_.size(); }

 private:
  struct Key {
    std::uint64_t x, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return static_cast<std::size_t>(splitmix64(k.x * 0x9e3779b97f4a7c15ULL ^ k.z)); }
  };
  const sim::Statevector& psi_;
  std::unordered_map<Key, double, KeyHash> values_;
};

/// One measurable Pauli term of a matrix element: coefficient and exact
/// expectation value on the measured state.
struct MeasuredTerm {
  double coefficient;
  double expectation;
};

/// Hermitian observable split into an exactly known identity part and the
/// Pauli terms that have to be sampled.
struct Decomposition {
  double constant = 0.0;
  std::vector<MeasuredTerm> terms;

  double exact() const {
    double v = constant;
    for (const auto& t : terms) v += t.coefficient * t.expectation;
    return v;
  }
};

/// Sum of shot-sampled terms. One stream per element; terms drawn in stored order.
template <class Rng>
double sample_decomposition(const Decomposition& d, const ShotNoiseModel& noise, Rng& rng) {
  std::int64_t shots = noise.shots_per_pauli_term;
  if (noise.accounting == ShotAccounting::split_total && !d.terms.empty())
    shots = std::max<std::int64_t>(1, shots / static_cast<std::int64_t>(d.terms.size()));
  double v = d.constant;
  for (const auto& t : d.terms) v += t.coefficient * sample_pauli_expectation(t.expectation, shots, noise.kind, rng);
  return v;
}

/// Splits `op` (assumed Hermitian up to the stored imaginary parts) into real
/// and imaginary Hermitian parts op = A + iB and records <psi|P|psi> per string.
inline void decompose(const qop::PauliOperator& op, ExpectationCache& cache, Decomposition& real_part,
                      Decomposition& imag_part) {
  for (const auto& [p, c] : op.terms()) {
    if (p.is_identity()) {
      real_part.constant += c.real();
      imag_part.constant += c.imag();
      continue;
    }
    const double x = cache(p);
    if (std::abs(c.real()) >= tol::kPrune) real_part.terms.push_back({c.real(), x});
    if (std::abs(c.imag()) >= tol::kPrune) imag_part.terms.push_back({c.imag(), x});
  }
}

/// Exact QSE matrices by direct statevector algebra:
///   H_IJ = <psi|G_I† H G_J|psi>,  S_IJ = <psi|G_I† G_J|psi>, then symmetrized.
inline SubspaceMatrices qse_matrices_exact(const sim::Statevector& psi, const ExcitationManifold& manifold,
                                           const qop::PauliOperator& h) {
  if (psi.n_qubits() != h.n_qubits()) throw SizeMismatch("qse_matrices_exact: qubit count mismatch");
  if (!manifold.include_identity || manifold.ops.empty() || manifold.ops[0].kind != qop::Excitation::Kind::identity)
    throw DomainError("qse_matrices_exact: QSE manifold must start with the identity");
  const auto d = static_cast<Eigen::Index>(manifold.size());
  const auto gs = manifold_paulis(manifold, h.n_qubits());
  std::vector<ComplexVector> v(gs.size()), hv(gs.size());
  for (std::size_t k = 0; k < gs.size(); ++k) {
    v[k] = sim::apply_pauli(gs[k], psi);
    hv[k] = sim::apply_pauli(h, v[k]);
  }
  ComplexMatrix hm(d, d), sm(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      hm(i, j) = v[static_cast<std::size_t>(i)].dot(hv[static_cast<std::size_t>(j)]);
      sm(i, j) = v[static_cast<std::size_t>(i)].dot(v[static_cast<std::size_t>(j)]);
    }
  SubspaceMatrices out;
  out.h = hermitian_part(hm);
  out.s = hermitian_part(sm);
  out.method = Method::qse;
  out.manifold_policy = qop::to_string(manifold.spin_policy);
  return out;
}

/// Pauli decompositions of every upper-triangle QSE element, with exact
/// expectations on the measured state. Built once, sampled many times.
struct QseSamplingPlan {
  Eigen::Index dim = 0;
  std::string manifold_policy;
  // Row-major upper triangle (I <= J).
  std::vector<Decomposition> h_real, h_imag, s_real, s_imag;
  ComplexMatrix s_exact;

  static std::size_t index(Eigen::Index i, Eigen::Index j, Eigen::Index dim) {
    return static_cast<std::size_t>(i * dim - i * (i - 1) / 2 + (j - i));
  }
  std::size_t total_terms() const {
    std::size_t n = 0;
    for (const auto& d : h_real) n += d.terms.size();
    for (const auto& d : s_real) n += d.terms.size();
    return n;
  }
};

inline constexpr std::size_t kMaxTermsPerElement = 1'000'000;

inline QseSamplingPlan build_qse_plan(const sim::Statevector& psi, const ExcitationManifold& manifold,
                                      const qop::PauliOperator& h) {
  if (psi.n_qubits() != h.n_qubits()) throw SizeMismatch("build_qse_plan: qubit count mismatch");
  if (!manifold.include_identity || manifold.ops.empty() || manifold.ops[0].kind != qop::Excitation::Kind::identity)
    throw DomainError("build_qse_plan: QSE manifold must start with the identity");
  const int n = h.n_qubits();
  const auto gs = manifold_paulis(manifold, n);
  std::vector<qop::PauliOperator> gs_adj;
  for (const auto& g : gs) gs_adj.push_back(g.adjoint());

  QseSamplingPlan plan;
  plan.dim = static_cast<Eigen::Index>(gs.size());
  plan.manifold_policy = qop::to_string(manifold.spin_policy);
  const auto n_upper = static_cast<std::size_t>(plan.dim * (plan.dim + 1) / 2);
  plan.h_real.resize(n_upper);
  plan.h_imag.resize(n_upper);
  plan.s_real.resize(n_upper);
  plan.s_imag.resize(n_upper);
  plan.s_exact = ComplexMatrix::Zero(plan.dim, plan.dim);

  ExpectationCache cache(psi);
  for (Eigen::Index i = 0; i < plan.dim; ++i)
    for (Eigen::Index j = i; j < plan.dim; ++j) {
      const auto k = QseSamplingPlan::index(i, j, plan.dim);
      const auto& gi = gs_adj[static_cast<std::size_t>(i)];
      const auto& gj = gs[static_cast<std::size_t>(j)];
      // Re/Im of the Pauli coefficients give the Hermitian parts ½(A + A†) and (A − A†)/2i.
      const auto a = qop::pauli_product(gi, h, gj);
      const auto b = qop::pauli_product(gi, gj);
      if (a.size() > kMaxTermsPerElement || b.size() > kMaxTermsPerElement)
        throw DomainError("build_qse_plan: element decomposition exceeds the term cap");
      decompose(a, cache, plan.h_real[k], plan.h_imag[k]);
      decompose(b, cache, plan.s_real[k], plan.s_imag[k]);
      const cplx s_val{plan.s_real[k].exact(), plan.s_imag[k].exact()};
      plan.s_exact(i, j) = s_val;
      plan.s_exact(j, i) = std::conj(s_val);
    }
  return plan;
}

namespace detail {
enum StreamTag : std::uint64_t { kHReal = 0, kSReal = 1, kHImag = 2, kSImag = 3, kDiag = 4, kPlus = 5, kMinus = 6 };
}  // namespace detail

enum class QseMatrix { h, s };

/// One sampled upper-triangle element of H or S.
inline cplx sample_qse_element(const QseSamplingPlan& plan, const ShotNoiseModel& noise, std::uint64_t rep, QseMatrix which,
                               Eigen::Index i, Eigen::Index j) {
  if (i > j) return std::conj(sample_qse_element(plan, noise, rep, which, j, i));
  if (i < 0 || j >= plan.dim) throw DomainError("sample_qse_element: index out of range");
  const auto k = QseSamplingPlan::index(i, j, plan.dim);
  const bool is_h = which == QseMatrix::h;
  const auto& real = is_h ? plan.h_real[k] : plan.s_real[k];
  const auto& imag = is_h ? plan.h_imag[k] : plan.s_imag[k];
  const auto shots = static_cast<std::uint64_t>(noise.shots_per_pauli_term);
  const auto ui = static_cast<std::uint64_t>(i), uj = static_cast<std::uint64_t>(j);
  auto rng = make_stream(noise.seed, {rep, shots, is_h ? detail::kHReal : detail::kSReal, ui, uj});
  const double re = sample_decomposition(real, noise, rng);
  double im = 0.0;
  if (noise.sample_imaginary && i != j) {
    auto rng_im = make_stream(noise.seed, {rep, shots, is_h ? detail::kHImag : detail::kSImag, ui, uj});
    im = sample_decomposition(imag, noise, rng_im);
  }
  return {re, im};
}

/// Shot-sampled QSE matrices for repetition `rep`. For
/// Method::qse_exact_overlap only H is sampled and S is the exact overlap.
inline SubspaceMatrices sample_qse(const QseSamplingPlan& plan, const ShotNoiseModel& noise, std::uint64_t rep,
                                   Method method = Method::qse) {
  if (method == Method::qsceom) throw DomainError("sample_qse: q-sc-EOM has its own sampler");
  const auto d = plan.dim;
  ComplexMatrix hm = ComplexMatrix::Zero(d, d), sm = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) {
      const cplx hv = sample_qse_element(plan, noise, rep, QseMatrix::h, i, j);
      hm(i, j) = hv;
      hm(j, i) = std::conj(hv);
      if (method == Method::qse) {
        const cplx sv = sample_qse_element(plan, noise, rep, QseMatrix::s, i, j);
        sm(i, j) = sv;
        sm(j, i) = std::conj(sv);
      }
    }
  if (method == Method::qse_exact_overlap) sm = plan.s_exact;

  SubspaceMatrices out;
  out.h = hm;
  out.s = sm;
  out.method = method;
  out.manifold_policy = plan.manifold_policy;
  out.provenance = {true, noise.shots_per_pauli_term, to_string(noise.kind), noise.seed};
  return out;
}

/// Builds the decomposition plan and draws one sample (repetition 0).
inline SubspaceMatrices qse_matrices_sampled(const sim::Statevector& psi, const ExcitationManifold& manifold,
                                             const qop::PauliOperator& h, const ShotNoiseModel& noise) {
  return sample_qse(build_qse_plan(psi, manifold, h), noise, 0);
}

}  // namespace gevpnoise::subspace
