// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Run from the repository root.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gevpnoise/chem/boys.hpp"
#include "gevpnoise/chem/integrals.hpp"
#include "gevpnoise/chem/rhf.hpp"
#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/experiment/config.hpp"
#include "gevpnoise/experiment/pipeline.hpp"
#include "gevpnoise/experiment/runner.hpp"
#include "gevpnoise/experiment/sweep.hpp"
#include "gevpnoise/qop/jordan_wigner.hpp"
#include "gevpnoise/solve/gevp.hpp"
#include "gevpnoise/subspace/manifold.hpp"
#include "gevpnoise/subspace/noise.hpp"
#include "gevpnoise/subspace/qse.hpp"
#include "gevpnoise/subspace/qsceom.hpp"
#include "gevpnoise/subspace/rng.hpp"
#include "support.hpp"

using namespace gevpnoise;
using experiment::ExperimentConfig;
using experiment::ExperimentResult;
using subspace::Method;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

constexpr double kEv = units::kHartreeToEv;

const experiment::MolecularSystem& h2() {
  static const auto s = experiment::build_system(chem::Geometry::parse("H 0 0 0\nH 0 0 0.7414\n"));
  return s;
}

struct Prepared {
  experiment::MolecularSystem system;
  experiment::GroundState ground;
};

const Prepared& prepared(const std::string& spec) {
  static std::map<std::string, Prepared> cache;
  auto it = cache.find(spec);
  if (it == cache.end()) {
    auto system = experiment::build_system(experiment::resolve_geometry(spec));
    auto ground = experiment::solve_ground_state(system);
    it = cache.emplace(spec, Prepared{std::move(system), std::move(ground)}).first;
  }
  return it->second;
}

// Results of the config runs, reused by the determinism check.
std::map<std::string, ExperimentResult>& runs() {
  static std::map<std::string, ExperimentResult> r;
  return r;
}

const ExperimentResult& run_config(const std::string& key, const ExperimentConfig& config) {
  auto it = runs().find(key);
  if (it == runs().end()) it = runs().emplace(key, experiment::run_experiment(config)).first;
  return it->second;
}

ExperimentConfig linear5_unthresholded() {
  auto c = ExperimentConfig::from_file("configs/linear_5.cfg");
  c.methods = {Method::qse};
  c.threshold = {};
  c.threshold_by_shots.clear();
  return c;
}

double boys_quadrature(double t) {
  const int n = 20000;
  const double h = 1.0 / n;
  double s = 1.0 + std::exp(-t);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * std::exp(-t * (k * h) * (k * h));
  return s * h / 3.0;
}

// Kronecker matrix of a Pauli word; new qubits become the most significant bit.
ComplexMatrix kron_word(const std::string& word) {
  const cplx i{0, 1};
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : word) {
    ComplexMatrix s(2, 2);
    if (c == 'X') s << 0, 1, 1, 0;
    else if (c == 'Y') s << 0, -i, i, 0;
    else if (c == 'Z') s << 1, 0, 0, -1;
    else s << 1, 0, 0, 1;
    ComplexMatrix next(out.rows() * 2, out.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = s(a, b) * out;
    out = next;
  }
  return out;
}

ComplexMatrix kron_dense(const qop::PauliOperator& op) {
  const auto dim = Eigen::Index{1} << op.n_qubits();
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& [p, c] : op.terms()) m += c * kron_word(p.word(op.n_qubits()));
  return m;
}

// ---------------------------------------------------------------------------

void unit_oracles(Outcome& o) {
  double boys = 0.0;
  for (double t : {0.0, 1e-6, 1e-3, 0.3, 2.5, 15.0, 60.0}) boys = std::max(boys, std::abs(chem::boys_f0(t) - boys_quadrature(t)));
  o.require(boys < 1e-10, "boys");

  double integrals = 0.0;
  const Vec3 A(0, 0, 0);
  for (double a : {0.3, 1.2})
    for (double r : {0.5, 1.7}) {
      const Vec3 B(0, r, 0);
      integrals = std::max(integrals, std::abs(chem::detail::prim_kinetic(a, A, a, A) - 1.5 * a));
      integrals = std::max(integrals, std::abs(chem::detail::prim_nuclear(a, A, a, A, B, 1.0) + std::erf(std::sqrt(2.0 * a) * r) / r));
      const double w = std::sqrt(2 * a * 2 * 0.8 / (2 * a + 2 * 0.8));
      integrals = std::max(integrals, std::abs(chem::detail::prim_eri(a, A, a, A, 0.8, B, 0.8, B) - std::erf(w * r) / r));
    }
  o.require(integrals < 1e-8, "integrals");

  const auto n0 = qop::jordan_wigner(qop::FermionOperator::product({qop::cre(0), qop::ann(0)}), 3);
  const auto expected = (qop::PauliOperator::identity(3) - qop::PauliOperator::term(3, "ZII")) * cplx{0.5, 0.0};
  o.require(n0 == expected, "jordan-wigner number operator");

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> coef;
  double product = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    auto random_op = [&] {
      std::vector<qop::PauliOperator::Term> t;
      for (int k = 0; k < 5; ++k) {
        std::string w(4, 'I');
        for (auto& c : w) c = "IXYZ"[pick(rng)];
        t.emplace_back(qop::PauliString::from_word(w), cplx{coef(rng), coef(rng)});
      }
      return qop::PauliOperator(4, std::move(t));
    };
    const auto a = random_op(), b = random_op();
    product = std::max(product, (kron_dense(a * b) - kron_dense(a) * kron_dense(b)).cwiseAbs().maxCoeff());
  }
  o.require(product < 1e-12, "pauli product");

  const double rhf = std::abs(h2().rhf.total_energy - testing_support::fixture("h2_rhf_energy"));
  o.require(rhf < 1e-6, "h2 rhf");
  o.detail << "boys " << num(boys) << ", integrals " << num(integrals) << ", product " << num(product) << ", rhf " << num(rhf);
}

void exactness_chain(Outcome& o) {
  const auto gs = experiment::solve_ground_state(h2());
  const auto fci = experiment::reference_spectrum(h2());
  const double vqe = std::abs(gs.vqe.energy - fci[0]);
  const auto manifold = subspace::build_manifold(h2().space, qop::SpinPolicy::sz_conserving, false);
  const auto e = solve::solve(subspace::qsceom_matrix_exact(gs.ansatz, gs.theta(), manifold, h2().hamiltonian)).energies();
  double excited = 0.0;
  for (std::size_t k = 0; k < e.size() && k + 1 < fci.size(); ++k) excited = std::max(excited, std::abs(e[k] - fci[k + 1]));
  o.require(vqe < 1e-6, "vqe vs fci");
  o.require(e.size() == 3 && excited < 1e-6, "excited energies");
  o.detail << "|E_vqe - E_fci| " << num(vqe) << " Ha, excited max dev " << num(excited) << " Ha";
}

void identity_overlap(Outcome& o) {
  for (const char* spec : {"square(1.5)", "linear(5.0)"}) {
    const auto& p = prepared(spec);
    const auto manifold = subspace::build_manifold(p.system.space, qop::SpinPolicy::sz_conserving, false);
    const double d = subspace::verify_identity_overlap(p.ground.ansatz, p.ground.theta(), manifold);
    o.require(d < 1e-10, spec);
    o.detail << spec << " max|S-I| " << num(d) << "  ";
  }
}

void interlacing(Outcome& o) {
  const auto& p = prepared("square(1.5)");
  const auto manifold = subspace::build_manifold(p.system.space, qop::SpinPolicy::sz_conserving, true);
  const auto e = solve::solve(subspace::qse_matrices_exact(p.ground.psi, manifold, p.system.hamiltonian)).energies();
  const auto fci = experiment::reference_spectrum(p.system);
  double worst = -1e300;
  for (std::size_t k = 0; k < e.size(); ++k) worst = std::max(worst, fci[k] - e[k]);
  o.require(e.size() == 27, "27 states");
  o.require(worst <= 1e-8, "E_qse >= E_exact rank by rank");
  o.detail << e.size() << " states, max(E_exact - E_qse) " << num(worst) << " Ha";
}

void low_kappa(Outcome& o) {
  const auto& r = run_config("square", ExperimentConfig::from_file("configs/square_1.5.cfg"));
  const double kappa = r.reference(0, Method::qse)->kappa;
  o.require(kappa >= 2 && kappa <= 50, "kappa in [2, 50]");
  for (auto m : {Method::qsceom, Method::qse}) {
    const auto* cell = r.cell(0, m, 10000);
    const double mae = cell ? cell->mean_abs_error_lowest(5) * kEv : NAN;
    o.require(mae < 0.2, subspace::to_string(m) + " lowest-5 error < 0.2 eV");
    o.detail << subspace::to_string(m) << " " << num(mae) << " eV, ";
  }
  o.detail << "kappa " << num(kappa);
}

const experiment::SweepResult& sweep() {
  static const auto s = [] {
    auto result = experiment::condition_sweep(ExperimentConfig::from_file("configs/linear_sweep.cfg"));
    runs().emplace("sweep", result.experiment);
    return result;
  }();
  return s;
}

std::size_t largest_kappa_geometry(const ExperimentResult& r) {
  std::size_t best = 0;
  for (std::size_t g = 0; g < r.geometries.size(); ++g)
    if (r.reference(g, Method::qse)->kappa > r.reference(best, Method::qse)->kappa) best = g;
  return best;
}

void medium_kappa_trend(Outcome& o) {
  const auto& s = sweep();
  const auto& r = s.experiment;
  double kmin = 1e300, kmax = 0;
  for (std::size_t g = 0; g < r.geometries.size(); ++g) {
    kmin = std::min(kmin, r.reference(g, Method::qse)->kappa);
    kmax = std::max(kmax, r.reference(g, Method::qse)->kappa);
  }
  o.require(r.geometries.size() >= 4, "at least 4 geometries");
  o.require(kmin >= 1e2 && kmax <= 1e3, "kappa spans [1e2, 1e3]");
  o.require(r.config.repetitions >= 10, "10 reps");
  double rho = NAN, spread = NAN;
  for (const auto& t : s.trends) {
    if (t.shots != 10000) continue;
    if (t.method == Method::qse) rho = t.spearman_ground;
    if (t.method == Method::qsceom) spread = t.spread_lowest;
  }
  o.require(rho > 0, "QSE ground error rises with kappa");
  o.require(spread < 2, "q-sc-EOM error spread < 2");
  o.detail << "kappa " << num(kmin) << ".." << num(kmax) << ", spearman " << num(rho) << ", q-sc-EOM spread " << num(spread);
}

void shot_equivalence(Outcome& o) {
  const auto& r = sweep().experiment;
  const auto g = largest_kappa_geometry(r);
  const double eom = r.cell(g, Method::qsceom, 10000)->mean_abs_error_lowest(5);
  const double qse = r.cell(g, Method::qse, 100000)->mean_abs_error_lowest(5);
  o.require(eom <= 2 * qse, "q-sc-EOM @1e4 <= 2 x QSE @1e5");
  o.detail << r.geometries[g].spec << ": q-sc-EOM@1e4 " << num(eom) << " Ha, QSE@1e5 " << num(qse) << " Ha";
}

void exact_overlap_control(Outcome& o) {
  const auto& r = sweep().experiment;
  const auto g = largest_kappa_geometry(r);
  const auto& exact = r.cell(g, Method::qse_exact_overlap, 10000)->states.front();
  const auto& sampled = r.cell(g, Method::qse, 10000)->states.front();
  o.require(exact.defined() && sampled.defined(), "both defined");
  o.require(exact.mean_abs_error < 0.5 * sampled.mean_abs_error, "exact-overlap error < half of sampled");
  o.detail << r.geometries[g].spec << ": exact overlap " << num(exact.mean_abs_error) << " Ha, sampled " << num(sampled.mean_abs_error)
           << " Ha";
}

void high_kappa(Outcome& o) {
  const auto& raw = run_config("linear5_eps0", linear5_unthresholded());
  const auto& thr = run_config("linear5", ExperimentConfig::from_file("configs/linear_5.cfg"));
  const double kappa = raw.reference(0, Method::qse)->kappa;
  o.require(kappa > 1e10, "kappa > 1e10");
  o.detail << "kappa " << num(kappa) << "; ";

  for (auto n : {500, 1000, 10000}) {
    int failed = 0, total = 0;
    for (const auto& rec : raw.records)
      if (rec.shots == n) {
        ++total;
        bool bad = !rec.ok();
        for (double e : rec.energies) bad = bad || !std::isfinite(e);
        failed += bad;
      }
    o.require(total > 0 && failed * 10 >= total * 9, "eps=0 fails in >= 9/10 at " + std::to_string(n));
    o.detail << "eps=0@" << n << " " << failed << "/" << total << "; ";
  }

  const Eigen::Index full = 27;  // sz-conserving QSE manifold incl. identity
  for (auto n : {500, 1000, 10000}) {
    int solved = 0, truncated = 0, with_missing = 0, total = 0, eom_missing = 0;
    for (const auto& rec : thr.records) {
      if (rec.shots != n) continue;
      const bool in_window = std::any_of(rec.missing_states.begin(), rec.missing_states.end(), [](std::size_t k) { return k < 5; });
      if (rec.method == Method::qse) {
        ++total;
        solved += rec.ok();
        truncated += rec.ok() && rec.retained_dim < full;
        with_missing += in_window;
      } else if (rec.method == Method::qsceom) {
        eom_missing += in_window || !rec.ok();
      }
    }
    o.require(total > 0 && solved == total, "thresholded QSE solves at " + std::to_string(n));
    o.require(truncated == total, "retained_dim < full at " + std::to_string(n));
    o.require(with_missing == total, "missing QSE state in window at " + std::to_string(n));
    o.require(eom_missing == 0, "q-sc-EOM complete at " + std::to_string(n));
    o.detail << "@" << n << " solved " << solved << " truncated " << truncated << " missing " << with_missing << "/" << total
             << " eom_missing " << eom_missing << "; ";
  }
}

void noise_statistics(Outcome& o) {
  const std::int64_t n = 10000;
  const int reps = 1000;
  double worst_bias = 0.0, worst_var = 0.0;
  for (double x : {-0.9, -0.3, 0.0, 0.5, 0.95}) {
    auto rng = subspace::make_stream(20240404, {static_cast<std::uint64_t>((x + 1.0) * 1000)});
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double v = subspace::sample_pauli_expectation(x, n, subspace::NoiseKind::pauli_binomial, rng);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / reps, var = (sum2 - reps * mean * mean) / (reps - 1);
    const double expected = (1.0 - x * x) / static_cast<double>(n);
    worst_bias = std::max(worst_bias, std::abs(mean - x) / std::sqrt(expected / reps));
    worst_var = std::max(worst_var, std::abs(var / expected - 1.0));
  }
  o.require(worst_bias < 5, "unbiased within 5 sigma");
  o.require(worst_var < 0.2, "variance within 20%");

  // Variance of a sampled H2 QSE matrix element against the shot count.
  const auto gs = experiment::solve_ground_state(h2());
  const auto manifold = subspace::build_manifold(h2().space, qop::SpinPolicy::sz_conserving, true);
  const auto plan = subspace::build_qse_plan(gs.psi, manifold, h2().hamiltonian);
  std::vector<double> lx, ly;
  for (std::int64_t shots : {100, 1000, 10000, 100000}) {
    subspace::ShotNoiseModel noise;
    noise.shots_per_pauli_term = shots;
    noise.seed = 20240505;
    double sum = 0.0, sum2 = 0.0;
    const int m = 2000;
    for (int r = 0; r < m; ++r) {
      const double v = subspace::sample_qse_element(plan, noise, static_cast<std::uint64_t>(r), subspace::QseMatrix::h, 1, 1).real();
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / m;
    lx.push_back(std::log10(static_cast<double>(shots)));
    ly.push_back(std::log10((sum2 - m * mean * mean) / (m - 1)));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  o.require(std::abs(slope + 1.0) <= 0.1, "variance slope -1 +- 0.1");
  o.detail << "max |bias|/sigma " << num(worst_bias) << ", max variance deviation " << num(worst_var) << ", slope " << num(slope);
}

void determinism(Outcome& o) {
  std::vector<std::pair<std::string, ExperimentConfig>> configs = {
      {"h2_exact", ExperimentConfig::from_file("configs/h2_exact.cfg")},
      {"square", ExperimentConfig::from_file("configs/square_1.5.cfg")},
      {"sweep", ExperimentConfig::from_file("configs/linear_sweep.cfg")},
      {"linear5", ExperimentConfig::from_file("configs/linear_5.cfg")},
      {"linear5_eps0", linear5_unthresholded()},
  };
  for (const auto& [key, config] : configs) {
    const auto& first = run_config(key, config);
    const auto second = experiment::run_experiment(config);
    const bool same = experiment::results_csv(first) == experiment::results_csv(second) &&
                      experiment::summary_csv(first) == experiment::summary_csv(second) &&
                      experiment::reference_csv(first) == experiment::reference_csv(second);
    o.require(same, key);
    o.detail << key << (same ? " identical  " : " DIFFERS  ");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"unit-level oracles", unit_oracles},
      {"exactness chain", exactness_chain},
      {"identity overlap", identity_overlap},
      {"interlacing", interlacing},
      {"low-kappa regime", low_kappa},
      {"medium-kappa trend", medium_kappa_trend},
      {"shot equivalence", shot_equivalence},
      {"exact-overlap control", exact_overlap_control},
      {"high-kappa singular regime", high_kappa},
      {"noise statistics", noise_statistics},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.passed;
    std::printf("%s %2zu %-28s %7.1fs  %s\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
