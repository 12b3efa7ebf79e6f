#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gevpnoise/experiment/pipeline.hpp"
#include "gevpnoise/solve/gevp.hpp"
#include "gevpnoise/subspace/manifold.hpp"
#include "gevpnoise/subspace/matrices.hpp"
#include "gevpnoise/subspace/noise.hpp"
#include "gevpnoise/subspace/qse.hpp"
#include "gevpnoise/subspace/qsceom.hpp"
#include "gevpnoise/subspace/rng.hpp"

using namespace gevpnoise;
using subspace::Method;

namespace {

struct Fixture {
  experiment::MolecularSystem system;
  experiment::GroundState ground;
  subspace::ExcitationManifold qse_manifold, eom_manifold;
};

Fixture make(const chem::Geometry& g) {
  Fixture f{experiment::build_system(g), {}, {}, {}};
  f.ground = experiment::solve_ground_state(f.system);
  f.qse_manifold = subspace::build_manifold(f.system.space, qop::SpinPolicy::sz_conserving, true);
  f.eom_manifold = subspace::build_manifold(f.system.space, qop::SpinPolicy::sz_conserving, false);
  return f;
}

const Fixture& h2() {
  static const Fixture f = make(chem::Geometry::parse("H 0 0 0\nH 0 0 0.7414\n"));
  return f;
}

const Fixture& square_h4() {
  static const Fixture f = make(chem::Geometry::square(1.5));
  return f;
}

subspace::ShotNoiseModel noise_with(std::int64_t shots, std::uint64_t seed = 1) {
  subspace::ShotNoiseModel n;
  n.shots_per_pauli_term = shots;
  n.seed = seed;
  return n;
}

}  // namespace

TEST(Rng, DeriveSeedIsDeterministicAndKeySensitive) {
  EXPECT_EQ(subspace::derive_seed(5, {1, 2, 3}), subspace::derive_seed(5, {1, 2, 3}));
  EXPECT_NE(subspace::derive_seed(5, {1, 2, 3}), subspace::derive_seed(5, {1, 3, 2}));
  EXPECT_NE(subspace::derive_seed(5, {1, 2, 3}), subspace::derive_seed(6, {1, 2, 3}));
  EXPECT_NE(subspace::derive_seed(5, {0}), subspace::derive_seed(5, {0, 0}));
}

TEST(Noise, EndpointsAreExactAndArgumentsChecked) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(subspace::sample_pauli_expectation(1.0, 10, subspace::NoiseKind::pauli_binomial, rng), 1.0);
  EXPECT_EQ(subspace::sample_pauli_expectation(-1.0, 10, subspace::NoiseKind::gaussian_approx, rng), -1.0);
  EXPECT_THROW(subspace::sample_pauli_expectation(0.3, 0, subspace::NoiseKind::pauli_binomial, rng), DomainError);
  EXPECT_THROW(subspace::sample_pauli_expectation(1.5, 10, subspace::NoiseKind::pauli_binomial, rng), DomainError);
}

TEST(Noise, BinomialValuesLieOnTheShotGrid) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const double v = subspace::sample_pauli_expectation(0.2, 8, subspace::NoiseKind::pauli_binomial, rng);
    const double m = (v + 1.0) * 4.0;
    EXPECT_NEAR(m, std::round(m), 1e-12);
  }
}

TEST(Noise, GaussianApproximationMoments) {
  std::mt19937_64 rng(3);
  const double x = -0.4;
  const int n = 400, reps = 20000;
  double sum = 0, sq = 0;
  for (int r = 0; r < reps; ++r) {
    const double v = subspace::sample_pauli_expectation(x, n, subspace::NoiseKind::gaussian_approx, rng);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / reps, var = sq / reps - mean * mean, expected = (1 - x * x) / n;
  EXPECT_NEAR(mean, x, 5 * std::sqrt(expected / reps));
  EXPECT_NEAR(var / expected, 1.0, 0.05);
}

TEST(Manifold, SizesAndIdentityPlacement) {
  const auto& f = square_h4();
  EXPECT_EQ(f.qse_manifold.size(), 27U);
  EXPECT_EQ(f.eom_manifold.size(), 26U);
  EXPECT_EQ(f.qse_manifold.ops.front().kind, qop::Excitation::Kind::identity);
  EXPECT_FALSE(f.qse_manifold.has_duplicates());
  EXPECT_EQ(subspace::build_manifold(f.system.space, qop::SpinPolicy::unrestricted, true).size(), 53U);
}

TEST(Qse, ExactMatricesMatchDirectStateConstruction) {
  const auto& f = square_h4();
  const auto m = subspace::qse_matrices_exact(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  const ComplexMatrix hd = f.system.hamiltonian.dense();
  const auto paulis = subspace::manifold_paulis(f.qse_manifold, 8);
  std::vector<ComplexVector> g;
  for (const auto& p : paulis) g.push_back(p.dense() * f.ground.psi.amplitudes());
  for (std::size_t i = 0; i < g.size(); i += 5)
    for (std::size_t j = 0; j < g.size(); j += 3) {
      const auto I = static_cast<Eigen::Index>(i), J = static_cast<Eigen::Index>(j);
      EXPECT_LT(std::abs((*m.s)(I, J) - g[i].dot(g[j])), 1e-12);
      EXPECT_LT(std::abs(m.h(I, J) - g[i].dot(hd * g[j])), 1e-11);
    }
}

TEST(Qse, FirstRowIsTheMeasuredState) {
  const auto& f = square_h4();
  const auto m = subspace::qse_matrices_exact(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  EXPECT_NEAR((*m.s)(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(m.h(0, 0).real(), f.ground.vqe.energy, 1e-10);
  // H_0J = <psi|H G_J|psi>.
  const auto paulis = subspace::manifold_paulis(f.qse_manifold, 8);
  for (std::size_t j = 0; j < paulis.size(); ++j) {
    const auto hg = f.system.hamiltonian * paulis[j];
    EXPECT_LT(std::abs(m.h(0, static_cast<Eigen::Index>(j)) - sim::expectation(f.ground.psi, hg)), 1e-11);
  }
}

TEST(Qse, OverlapIsHermitianPositiveSemidefinite) {
  const auto& f = square_h4();
  const auto m = subspace::qse_matrices_exact(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  EXPECT_LT((*m.s - m.s->adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((m.h - m.h.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT(solve::sym_eig(*m.s).values.minCoeff(), -1e-12);
}

TEST(Qse, ManifoldWithoutIdentityRejected) {
  const auto& f = h2();
  EXPECT_THROW(subspace::qse_matrices_exact(f.ground.psi, f.eom_manifold, f.system.hamiltonian), DomainError);
}

TEST(Qse, PlanReproducesExactMatrices) {
  const auto& f = h2();
  const auto plan = subspace::build_qse_plan(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  const auto m = subspace::qse_matrices_exact(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  for (Eigen::Index i = 0; i < plan.dim; ++i)
    for (Eigen::Index j = i; j < plan.dim; ++j) {
      const auto k = subspace::QseSamplingPlan::index(i, j, plan.dim);
      EXPECT_NEAR(plan.h_real[k].exact(), m.h(i, j).real(), 1e-12);
      EXPECT_NEAR(plan.s_real[k].exact(), (*m.s)(i, j).real(), 1e-12);
    }
}

TEST(Qse, SamplingIsDeterministicPerRepetition) {
  const auto& f = h2();
  const auto plan = subspace::build_qse_plan(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  const auto noise = noise_with(1000, 42);
  const auto a = subspace::sample_qse(plan, noise, 3), b = subspace::sample_qse(plan, noise, 3);
  const auto c = subspace::sample_qse(plan, noise, 4);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(*a.s, *b.s);
  EXPECT_NE(a.h, c.h);
  EXPECT_TRUE(a.provenance.sampled);
  EXPECT_EQ(a.provenance.shots_per_element, 1000);
  EXPECT_LT((a.h - a.h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Qse, ExactOverlapVariantKeepsOverlap) {
  const auto& f = h2();
  const auto plan = subspace::build_qse_plan(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  const auto noise = noise_with(100, 9);
  const auto sampled = subspace::sample_qse(plan, noise, 0, Method::qse);
  const auto exact_s = subspace::sample_qse(plan, noise, 0, Method::qse_exact_overlap);
  EXPECT_EQ(*exact_s.s, plan.s_exact);
  EXPECT_EQ(exact_s.h, sampled.h);
}

TEST(Qse, SampledElementIsUnbiased) {
  const auto& f = h2();
  const auto plan = subspace::build_qse_plan(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  const auto noise = noise_with(200, 5);
  for (auto [i, j] : {std::pair<Eigen::Index, Eigen::Index>{0, 0}, {1, 2}, {0, 3}, {2, 2}}) {
    const auto k = subspace::QseSamplingPlan::index(i, j, plan.dim);
    const double exact = plan.h_real[k].exact();
    const int reps = 2000;
    double sum = 0, sq = 0;
    for (int r = 0; r < reps; ++r) {
      const double v = subspace::sample_qse_element(plan, noise, static_cast<std::uint64_t>(r), subspace::QseMatrix::h, i, j).real();
      sum += v;
      sq += v * v;
    }
    const double mean = sum / reps, sd = std::sqrt(std::max(sq / reps - mean * mean, 1e-30));
    EXPECT_LE(std::abs(mean - exact), 5 * sd / std::sqrt(reps) + 1e-12) << i << "," << j;
  }
}

TEST(Qse, SplitTotalAccountingIncreasesVariance) {
  const auto& f = square_h4();
  const auto plan = subspace::build_qse_plan(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  auto per_term = noise_with(1000, 3), split = per_term;
  split.accounting = subspace::ShotAccounting::split_total;
  auto spread = [&](const subspace::ShotNoiseModel& n) {
    double sq = 0;
    const auto k = subspace::QseSamplingPlan::index(1, 5, plan.dim);
    for (int r = 0; r < 200; ++r) {
      const double v = subspace::sample_qse_element(plan, n, static_cast<std::uint64_t>(r), subspace::QseMatrix::h, 1, 5).real();
      sq += (v - plan.h_real[k].exact()) * (v - plan.h_real[k].exact());
    }
    return sq;
  };
  EXPECT_GT(spread(split), 2.0 * spread(per_term));
}

TEST(Qsceom, OverlapIsIdentity) {
  const auto& f = square_h4();
  EXPECT_LT(subspace::verify_identity_overlap(f.ground.ansatz, f.ground.theta(), f.eom_manifold), 1e-10);
  EXPECT_LT(subspace::verify_identity_overlap(f.ground.ansatz, f.ground.theta(), f.eom_manifold, true), 1e-10);
}

TEST(Qsceom, MatrixMatchesDenseOracle) {
  const auto& f = square_h4();
  const auto m = subspace::qsceom_matrix_exact(f.ground.ansatz, f.ground.theta(), f.eom_manifold, f.system.hamiltonian);
  EXPECT_FALSE(m.s.has_value());
  const ComplexMatrix hd = f.system.hamiltonian.dense();
  const auto paulis = subspace::manifold_paulis(f.eom_manifold, 8);
  std::vector<ComplexVector> phi;
  for (const auto& p : paulis)
    phi.push_back(f.ground.ansatz.apply(f.ground.theta(), p.dense() * f.ground.ansatz.reference.amplitudes()));
  EXPECT_NEAR(m.energy_offset, f.ground.e_hf, 1e-12);
  for (std::size_t i = 0; i < phi.size(); i += 4)
    for (std::size_t j = 0; j < phi.size(); j += 3) {
      const cplx expected = phi[i].dot(hd * phi[j]) - (i == j ? m.energy_offset : 0.0);
      EXPECT_LT(std::abs(m.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expected), 1e-11);
    }
}

TEST(Qsceom, OffsetChoiceDoesNotChangeEnergies) {
  const auto& f = square_h4();
  const auto a = subspace::qsceom_matrix_exact(f.ground.ansatz, f.ground.theta(), f.eom_manifold, f.system.hamiltonian,
                                               {subspace::OffsetChoice::hf, false});
  const auto b = subspace::qsceom_matrix_exact(f.ground.ansatz, f.ground.theta(), f.eom_manifold, f.system.hamiltonian,
                                               {subspace::OffsetChoice::vqe, false});
  const auto ea = solve::solve(a).energies(), eb = solve::solve(b).energies();
  for (std::size_t k = 0; k < ea.size(); ++k) EXPECT_NEAR(ea[k], eb[k], 1e-10);
}

TEST(Qsceom, GroundRowAddsTheVqeEnergy) {
  const auto& f = square_h4();
  const auto m = subspace::qsceom_matrix_exact(f.ground.ansatz, f.ground.theta(), f.eom_manifold, f.system.hamiltonian,
                                               {subspace::OffsetChoice::hf, true});
  EXPECT_EQ(m.dim(), 27);
  EXPECT_NEAR(m.h(0, 0).real() + m.energy_offset, f.ground.vqe.energy, 1e-10);
}

TEST(Qsceom, RejectsIdentityInManifold) {
  const auto& f = h2();
  EXPECT_THROW(subspace::qsceom_matrix_exact(f.ground.ansatz, f.ground.theta(), f.qse_manifold, f.system.hamiltonian),
               DomainError);
}

TEST(Qsceom, PlanAndSamplerAreConsistent) {
  const auto& f = h2();
  const auto plan = subspace::build_qsceom_plan(f.ground.ansatz, f.ground.theta(), f.eom_manifold, f.system.hamiltonian);
  const auto exact = subspace::qsceom_matrix_exact(f.ground.ansatz, f.ground.theta(), f.eom_manifold, f.system.hamiltonian);
  for (Eigen::Index i = 0; i < plan.dim; ++i) {
    EXPECT_NEAR(plan.diag[static_cast<std::size_t>(i)].exact() - plan.offset, exact.h(i, i).real(), 1e-12);
    for (Eigen::Index j = i + 1; j < plan.dim; ++j) {
      const auto k = subspace::QsceomSamplingPlan::index(i, j, plan.dim);
      EXPECT_NEAR(0.5 * (plan.plus[k].exact() - plan.minus[k].exact()), exact.h(i, j).real(), 1e-12);
    }
  }
  const auto noise = noise_with(500, 77);
  const auto a = subspace::sample_qsceom(plan, noise, 2), b = subspace::sample_qsceom(plan, noise, 2);
  EXPECT_EQ(a.h, b.h);
  EXPECT_LT((a.h - a.h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Matrices, CsvRoundTrip) {
  const auto& f = h2();
  const auto m = subspace::qse_matrices_exact(f.ground.psi, f.qse_manifold, f.system.hamiltonian);
  const auto back = subspace::from_csv(subspace::to_csv(m));
  EXPECT_LT((back.h - m.h).cwiseAbs().maxCoeff(), 1e-15);
  ASSERT_TRUE(back.s.has_value());
  EXPECT_LT((*back.s - *m.s).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(back.method, m.method);
}
