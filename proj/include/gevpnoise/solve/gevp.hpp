#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/core/text.hpp"
#include "gevpnoise/subspace/matrices.hpp"

namespace gevpnoise::solve {

struct SymEig {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // orthonormal columns
  double asymmetry = 0.0;  // max |A - A†| of the input
};

inline void check_finite(const ComplexMatrix& a, const char* who) {
  if (!a.allFinite()) throw DomainError(std::string(who) + ": non-finite matrix entry");
}

/// Hermitian eigendecomposition. The input is symmetrized first; the
/// asymmetry removed is reported.
inline SymEig sym_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw SizeMismatch("sym_eig: matrix is not square");
  check_finite(a, "sym_eig");
  SymEig out;
  if (a.rows() == 0) return out;
  out.asymmetry = (a - a.adjoint()).cwiseAbs().maxCoeff();
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw Error("sym_eig: eigensolver failed");
  out.values = eig.eigenvalues();
  out.vectors = eig.eigenvectors();
  return out;
}

inline double condition_number_from(const RealVector& eigenvalues) {
  if (eigenvalues.size() == 0) return 1.0;
  const RealVector s = eigenvalues.cwiseAbs();
  const double smin = s.minCoeff();
  if (smin < tol::kSingularValueFloor) return std::numeric_limits<double>::infinity();
  return s.maxCoeff() / smin;
}

/// κ = σ_max / σ_min from absolute eigenvalues; +inf when σ_min < 1e-30.
inline double condition_number(const ComplexMatrix& s) { return condition_number_from(sym_eig(s).values); }

struct GevpDiagnostics {
  double min_overlap_eigenvalue = 1.0;
  bool was_singular = false;
};

struct GevpSolution {
  RealVector eigenvalues;        // ascending, offset included
  ComplexMatrix eigenvectors;    // coefficients in the original (non-orthogonal) basis
  Eigen::Index retained_dim = 0;
  double threshold_used = 0.0;
  double condition_number = 1.0;
  GevpDiagnostics diagnostics;

  std::vector<double> energies() const { return {eigenvalues.data(), eigenvalues.data() + eigenvalues.size()}; }
};

struct GevpOptions {
  double threshold = 0.0;
  bool relative = false;  // threshold relative to the largest overlap eigenvalue
};

/// Canonical orthogonalization: keep overlap eigenpairs with λ > ε, form
/// X = V Λ^{-1/2} and diagonalize X† H X. With ε = 0 a non-positive-definite
/// overlap raises IllConditioned.
inline GevpSolution solve_gevp(const ComplexMatrix& h, const ComplexMatrix& s, double offset = 0.0,
                               const GevpOptions& options = {}) {
  if (h.rows() != h.cols() || s.rows() != s.cols() || h.rows() != s.rows())
    throw SizeMismatch("solve_gevp: H and S must be square with equal dimensions");
  if (!(options.threshold >= 0.0)) throw DomainError("solve_gevp: threshold must be >= 0");
  check_finite(h, "solve_gevp");
  check_finite(s, "solve_gevp");
  if (h.rows() == 0) throw EmptySubspace("solve_gevp: empty matrices");

  const SymEig se = sym_eig(s);
  GevpSolution out;
  out.condition_number = condition_number_from(se.values);
  out.diagnostics.min_overlap_eigenvalue = se.values.minCoeff();
  const double eps = options.relative ? options.threshold * se.values.maxCoeff() : options.threshold;
  out.threshold_used = options.threshold;

  if (options.threshold == 0.0) {
    if (out.diagnostics.min_overlap_eigenvalue <= tol::kPositiveDefinite) {
      out.diagnostics.was_singular = true;
      throw IllConditioned("solve_gevp: overlap matrix is not positive definite", out.diagnostics.min_overlap_eigenvalue,
                           out.condition_number);
    }
  } else if (out.diagnostics.min_overlap_eigenvalue < -eps) {
    out.diagnostics.was_singular = true;
  }

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < se.values.size(); ++i)
    if (se.values(i) > eps && se.values(i) > 0.0) kept.push_back(i);
  if (kept.empty()) throw EmptySubspace("solve_gevp: threshold removed every overlap eigenvector");

  const auto k = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix x(s.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) x.col(c) = se.vectors.col(kept[static_cast<std::size_t>(c)]) / std::sqrt(se.values(kept[static_cast<std::size_t>(c)]));
  const ComplexMatrix hp = x.adjoint() * (0.5 * (h + h.adjoint())) * x;
  if (!hp.allFinite())
    throw IllConditioned("solve_gevp: projected Hamiltonian is not finite", out.diagnostics.min_overlap_eigenvalue,
                         out.condition_number);
  const SymEig he = sym_eig(hp);
  out.eigenvalues = he.values.array() + offset;
  out.eigenvectors = x * he.vectors;
  out.retained_dim = k;
  if (!out.eigenvalues.allFinite())
    throw IllConditioned("solve_gevp: non-finite eigenvalues", out.diagnostics.min_overlap_eigenvalue,
                         out.condition_number);
  return out;
}

/// Ordinary Hermitian eigenproblem (identity overlap).
inline GevpSolution solve_standard(const ComplexMatrix& h, double offset = 0.0) {
  if (h.rows() != h.cols()) throw SizeMismatch("solve_standard: matrix is not square");
  if (h.rows() == 0) throw EmptySubspace("solve_standard: empty matrix");
  const SymEig he = sym_eig(h);
  GevpSolution out;
  out.eigenvalues = he.values.array() + offset;
  out.eigenvectors = he.vectors;
  out.retained_dim = h.rows();
  return out;
}

/// Solves the stored problem; matrices without an overlap are treated as S = I.
inline GevpSolution solve(const subspace::SubspaceMatrices& m, const GevpOptions& options = {}) {
  if (!m.s) return solve_standard(m.h, m.energy_offset);
  return solve_gevp(m.h, *m.s, m.energy_offset, options);
}

/// Candidate thresholds: 0, then 1, 2, 5 × 10^k for k = -12..-1, then 1.
inline std::vector<double> threshold_grid() {
  std::vector<double> grid{0.0};
  for (int k = -12; k <= -1; ++k)
    for (double m : {1.0, 2.0, 5.0}) grid.push_back(m * std::pow(10.0, k));
  grid.push_back(1.0);
  return grid;
}

struct AutoThreshold {
  double threshold = 0.0;
  GevpSolution solution;
};

/// Smallest grid threshold that gives a solution with every eigenvalue inside
/// [-bound, bound] (bound: a norm bound on the full Hamiltonian spectrum).
inline AutoThreshold auto_threshold(const ComplexMatrix& h, const ComplexMatrix& s, double offset, double bound,
                                    bool relative = false) {
  for (double eps : threshold_grid()) {
    try {
      auto sol = solve_gevp(h, s, offset, {eps, relative});
      if (sol.eigenvalues.cwiseAbs().maxCoeff() <= bound) return {eps, std::move(sol)};
    } catch (const IllConditioned&) {
    } catch (const EmptySubspace&) {
      break;
    }
  }
  throw EmptySubspace("auto_threshold: no threshold on the grid gives a bounded solution");
}

/// `# key=value` metadata, then `state,energy_ha,energy_ev` rows.
inline std::string solution_to_csv(const GevpSolution& sol) {
  std::ostringstream out;
  out << "# condition_number=" << text::format_double(sol.condition_number) << "\n";
  out << "# threshold=" << text::format_double(sol.threshold_used) << "\n";
  out << "# retained_dim=" << sol.retained_dim << "\n";
  out << "# was_singular=" << (sol.diagnostics.was_singular ? "true" : "false") << "\n";
  out << "state,energy_ha,energy_ev\n";
  for (Eigen::Index i = 0; i < sol.eigenvalues.size(); ++i)
    out << i << ',' << text::format_double(sol.eigenvalues(i)) << ','
        << text::format_double(sol.eigenvalues(i) * units::kHartreeToEv) << '\n';
  return out.str();
}

}  // namespace gevpnoise::solve
