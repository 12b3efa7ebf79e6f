#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gevpnoise/experiment/config.hpp"
#include "gevpnoise/experiment/pipeline.hpp"
#include "gevpnoise/qop/jordan_wigner.hpp"
#include "gevpnoise/solve/gevp.hpp"
#include "gevpnoise/subspace/manifold.hpp"
#include "gevpnoise/subspace/qse.hpp"
#include "gevpnoise/subspace/qsceom.hpp"

namespace gevpnoise::experiment {

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick self-checks on H2 and square H4 (a few seconds in total).
inline std::vector<InvariantCheck> run_invariant_suite() {
  std::vector<InvariantCheck> out;
  auto check = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    InvariantCheck c{name, false, ""};
    try {
      std::tie(c.passed, c.detail) = body();
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(c));
  };
  auto num = [](double v) { return text::format_double(v); };

  check("jw_number_operator", [&] {
    const auto n0 = qop::jordan_wigner(qop::FermionOperator::product({qop::cre(0), qop::ann(0)}), 2);
    const auto expected = (qop::PauliOperator::identity(2) - qop::PauliOperator::term(2, "ZI")) * cplx{0.5, 0.0};
    const double diff = (n0 - expected).one_norm();
    return std::pair{diff == 0.0, "|diff|_1 = " + num(diff)};
  });

  const auto h2 = build_system(chem::Geometry::parse("H 0 0 0\nH 0 0 0.7414\n"));
  const auto h2_ground = solve_ground_state(h2);
  const auto h2_fci = reference_spectrum(h2);

  check("hamiltonian_hermitian", [&] { return std::pair{h2.hamiltonian.is_hermitian(), std::string()}; });

  check("h2_vqe_equals_fci", [&] {
    const double d = std::abs(h2_ground.vqe.energy - h2_fci[0]);
    return std::pair{d < 1e-6, "|E_vqe - E_fci| = " + num(d)};
  });

  check("h2_qsceom_exact_spectrum", [&] {
    const auto manifold = subspace::build_manifold(h2.space, qop::SpinPolicy::sz_conserving, false);
    const auto m = subspace::qsceom_matrix_exact(h2_ground.ansatz, h2_ground.theta(), manifold, h2.hamiltonian);
    const auto e = solve::solve(m).energies();
    double worst = 0.0;
    for (std::size_t k = 0; k < e.size() && k + 1 < h2_fci.size(); ++k) worst = std::max(worst, std::abs(e[k] - h2_fci[k + 1]));
    return std::pair{e.size() == 3 && worst < 1e-6, "max deviation " + num(worst)};
  });

  const auto h4 = build_system(chem::Geometry::square(1.5));
  const auto h4_ground = solve_ground_state(h4);
  const auto h4_fci = reference_spectrum(h4);

  check("square_h4_identity_overlap", [&] {
    const auto manifold = subspace::build_manifold(h4.space, qop::SpinPolicy::sz_conserving, false);
    const double d = subspace::verify_identity_overlap(h4_ground.ansatz, h4_ground.theta(), manifold);
    return std::pair{d < 1e-10, "max|S - I| = " + num(d)};
  });

  check("square_h4_qse_interlacing", [&] {
    const auto manifold = subspace::build_manifold(h4.space, qop::SpinPolicy::sz_conserving, true);
    const auto m = subspace::qse_matrices_exact(h4_ground.psi, manifold, h4.hamiltonian);
    const auto e = solve::solve(m).energies();
    double worst = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) worst = std::max(worst, h4_fci[k] - e[k]);
    return std::pair{worst <= 1e-8, "max(E_ref - E_qse) = " + num(worst)};
  });

  check("config_round_trip", [&] {
    ExperimentConfig c;
    c.geometries = {"square(1.5)", "linear_custom(1,2,3)"};
    c.shots = {0, 100, 10000};
    c.threshold_by_shots[100] = ThresholdPolicy::parse("fixed:0.01");
    const auto back = ExperimentConfig::parse(c.to_text());
    return std::pair{back == c && back.hash() == c.hash(), std::string()};
  });

  return out;
}

}  // namespace gevpnoise::experiment
