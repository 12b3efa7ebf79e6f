#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gevpnoise/chem/boys.hpp"
#include "gevpnoise/chem/geometry.hpp"
#include "gevpnoise/chem/integrals.hpp"
#include "gevpnoise/chem/rhf.hpp"
#include "support.hpp"

using namespace gevpnoise;
using testing_support::fixture;

namespace {

// Composite Simpson rule for F0(t) = int_0^1 exp(-t u^2) du.
double boys_quadrature(double t) {
  const int n = 20000;
  const double h = 1.0 / n;
  double s = 1.0 + std::exp(-t);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * std::exp(-t * (k * h) * (k * h));
  return s * h / 3.0;
}

}  // namespace

TEST(Boys, MatchesQuadrature) {
  for (double t : {0.0, 1e-8, 1e-4, 9.99e-4, 1e-3, 0.01, 0.3, 1.0, 2.5, 7.0, 15.0, 30.0, 60.0})
    EXPECT_NEAR(chem::boys_f0(t), boys_quadrature(t), 1e-10) << "t = " << t;
}

TEST(Boys, LimitsAndErrors) {
  EXPECT_DOUBLE_EQ(chem::boys_f0(0.0), 1.0);
  EXPECT_NEAR(chem::boys_f0(1e4), 0.5 * std::sqrt(std::numbers::pi / 1e4), 1e-15);
  EXPECT_THROW(chem::boys_f0(-1.0), DomainError);
  EXPECT_THROW(chem::boys_f0(std::nan("")), DomainError);
}

TEST(Boys, ContinuousAcrossSeriesSwitch) {
  EXPECT_NEAR(chem::boys_f0(1e-3 - 1e-12), chem::boys_f0(1e-3), 1e-12);
}

// Closed forms for normalized s primitives.
TEST(Integrals, PrimitiveOverlapClosedForm) {
  const Vec3 A(0, 0, 0), B(0.3, -0.4, 1.1);
  for (double a : {0.1, 0.6, 3.4})
    for (double b : {0.2, 1.5}) {
      const double mu = a * b / (a + b);
      const double expected = std::pow(2.0 * std::sqrt(a * b) / (a + b), 1.5) * std::exp(-mu * (A - B).squaredNorm());
      EXPECT_NEAR(chem::primitive_overlap(a, A, b, B), expected, 1e-12);
    }
}

TEST(Integrals, KineticSelfClosedForm) {
  // <g|-1/2 nabla^2|g> = 3a/2 for a normalized s Gaussian.
  const Vec3 A(0.5, 0.1, -0.2);
  for (double a : {0.2, 1.0, 4.0}) EXPECT_NEAR(chem::detail::prim_kinetic(a, A, a, A), 1.5 * a, 1e-12);
}

TEST(Integrals, NuclearAttractionClosedForm) {
  // |g|^2 is a normalized Gaussian charge of exponent 2a: potential -erf(sqrt(2a) R)/R.
  const Vec3 A(0, 0, 0);
  for (double a : {0.3, 1.2})
    for (double r : {0.5, 1.4, 3.0}) {
      const Vec3 C(0, 0, r);
      EXPECT_NEAR(chem::detail::prim_nuclear(a, A, a, A, C, 1.0), -std::erf(std::sqrt(2.0 * a) * r) / r, 1e-12);
    }
  EXPECT_NEAR(chem::detail::prim_nuclear(0.7, A, 0.7, A, A, 1.0), -2.0 * std::sqrt(1.4 / std::numbers::pi), 1e-12);
}

TEST(Integrals, CoulombClosedForm) {
  // Two Gaussian charges of exponents 2a, 2b: erf(sqrt(ab'/(a'+b')) R)/R with a' = 2a.
  const Vec3 A(0, 0, 0);
  for (double a : {0.4, 1.0})
    for (double b : {0.25, 2.0})
      for (double r : {0.0, 0.8, 2.2}) {
        const Vec3 B(r, 0, 0);
        const double alpha = 2 * a, beta = 2 * b;
        const double w = std::sqrt(alpha * beta / (alpha + beta));
        const double expected = r == 0.0 ? 2.0 * w / std::sqrt(std::numbers::pi) : std::erf(w * r) / r;
        EXPECT_NEAR(chem::detail::prim_eri(a, A, a, A, b, B, b, B), expected, 1e-12);
      }
}

TEST(Integrals, H2AgainstFixtures) {
  const auto g = chem::Geometry::parse("H 0 0 0\nH 0 0 0.7414\n");
  const auto ints = chem::build_integrals(g);
  EXPECT_NEAR(ints.overlap(0, 1), fixture("h2_overlap_01"), 1e-6);
  EXPECT_NEAR(ints.nuclear_repulsion, fixture("h2_nuclear_repulsion"), 1e-6);
  EXPECT_NEAR(ints.overlap(0, 0), 1.0, 1e-12);
}

TEST(Integrals, SymmetriesHold) {
  const auto ints = chem::build_integrals(chem::Geometry::linear_custom(0.7, 1.1, 0.9));
  const auto n = ints.n_ao;
  EXPECT_LT((ints.overlap - ints.overlap.transpose()).norm(), 1e-14);
  EXPECT_LT((ints.kinetic - ints.kinetic.transpose()).norm(), 1e-14);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(ints.eri(i, j, 1, 2), ints.eri(2, 1, j, i), 1e-14);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(ints.overlap);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Integrals, TranslationInvariance) {
  const auto g = chem::Geometry::square(1.2);
  const auto a = chem::build_integrals(g), b = chem::build_integrals(g.translated(0.3, -1.0, 2.0));
  EXPECT_LT((a.overlap - b.overlap).norm(), 1e-12);
  EXPECT_LT((a.core_hamiltonian() - b.core_hamiltonian()).norm(), 1e-10);
  EXPECT_NEAR(a.nuclear_repulsion, b.nuclear_repulsion, 1e-12);
}

TEST(Integrals, SingleCenterOverload) {
  const auto lib = chem::BasisLibrary::sto3g();
  const auto shells = lib.shells_for(chem::Geometry::parse("H 0 0 0\nH 0 0 1\n"));
  const auto ints = chem::build_integrals({shells[0]}, {shells[0].center});
  EXPECT_NEAR(ints.overlap(0, 0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(ints.nuclear_repulsion, 0.0);
}

TEST(Geometry, RejectsBadInput) {
  EXPECT_THROW(chem::Geometry::parse("H 0 0 0\n"), DegenerateGeometry);
  EXPECT_THROW(chem::Geometry::parse("H 0 0 0\nH 0 0 0\n"), DegenerateGeometry);
  EXPECT_THROW(chem::Geometry::parse("H 0 0 0\nHe 0 0 1\n"), DomainError);
  EXPECT_THROW(chem::Geometry::parse("H 0 0\nH 0 0 1\n"), FormatError);
}

TEST(Geometry, TextRoundTrip) {
  const auto g = chem::Geometry::linear_custom(0.74, 1.3, 2.05);
  EXPECT_EQ(chem::Geometry::parse(g.to_string()), g);
}

TEST(Rhf, H2MatchesFixture) {
  const auto ints = chem::build_integrals(chem::Geometry::parse("H 0 0 0\nH 0 0 0.7414\n"));
  const auto r = chem::run_rhf(ints, 2);
  EXPECT_NEAR(r.total_energy, fixture("h2_rhf_energy"), 1e-6);
  const RealMatrix mo_h = r.mo_coefficients.transpose() * ints.core_hamiltonian() * r.mo_coefficients;
  EXPECT_NEAR(mo_h(0, 0), fixture("h2_mo_h00"), 1e-6);
}

TEST(Rhf, SquareH4MatchesFixture) {
  const auto ints = chem::build_integrals(chem::Geometry::square(1.5));
  const auto r = chem::run_rhf(ints, 4);
  EXPECT_NEAR(r.total_energy, fixture("h4_square_1.5_rhf_energy"), 1e-6);
}

TEST(Rhf, OrthonormalOrbitalsAndIdempotentDensity) {
  const auto ints = chem::build_integrals(chem::Geometry::linear(1.1));
  const auto r = chem::run_rhf(ints, 4);
  const RealMatrix ctsc = r.mo_coefficients.transpose() * ints.overlap * r.mo_coefficients;
  EXPECT_LT((ctsc - RealMatrix::Identity(4, 4)).norm(), 1e-10);
  const RealMatrix p = r.density();
  EXPECT_LT((0.5 * p * ints.overlap * p - p).norm(), 1e-8);
  EXPECT_NEAR((p * ints.overlap).trace(), 4.0, 1e-10);
}

TEST(Rhf, StretchedLinearConverges) {
  const auto r = chem::run_rhf(chem::build_integrals(chem::Geometry::linear(5.0)), 4);
  EXPECT_TRUE(std::isfinite(r.total_energy));
  EXPECT_LT(r.total_energy, -1.19);
}

TEST(Rhf, DiisRescuesAsymmetricStretch) {
  const auto r = chem::run_rhf(chem::build_integrals(chem::Geometry::linear_custom(3.0, 2.5, 4.0)), 4);
  EXPECT_TRUE(std::isfinite(r.total_energy));
}

TEST(Rhf, RejectsOddElectronCount) {
  const auto ints = chem::build_integrals(chem::Geometry::parse("H 0 0 0\nH 0 0 0.7414\n"));
  EXPECT_THROW(chem::run_rhf(ints, 1), DomainError);
}
