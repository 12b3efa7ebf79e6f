#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/text.hpp"
#include "gevpnoise/experiment/config.hpp"
#include "gevpnoise/experiment/pipeline.hpp"
#include "gevpnoise/solve/gevp.hpp"
#include "gevpnoise/solve/matching.hpp"
#include "gevpnoise/solve/statistics.hpp"
#include "gevpnoise/subspace/manifold.hpp"
#include "gevpnoise/subspace/qse.hpp"
#include "gevpnoise/subspace/qsceom.hpp"
#include "gevpnoise/subspace/rng.hpp"

namespace gevpnoise::experiment {

/// Per-geometry quantities shared by every method and shots value.
struct GeometryInfo {
  std::string spec;
  double e_rhf = 0.0;
  double e_hf = 0.0;
  double e_vqe = 0.0;
  int vqe_iterations = 0;
  std::vector<double> fci;  // (N, Sz = 0) sector, ascending
};

/// One solved (or failed) repetition.
struct RepetitionRecord {
  std::size_t geometry = 0;
  subspace::Method method = subspace::Method::qse;
  std::int64_t shots = 0;
  int rep = 0;
  std::string status = "ok";
  std::vector<double> energies;
  double threshold = 0.0;
  Eigen::Index retained_dim = 0;
  double overlap_kappa = 1.0;               // of the matrices actually solved
  std::vector<std::size_t> missing_states;  // exact eigenstates of the method with no match
  double wall_seconds = 0.0;

  bool ok() const noexcept { return status == "ok"; }
};

/// Statistics of one (geometry, method, shots) cell against the method's own
/// exact eigenvalues.
struct SummaryCell {
  std::size_t geometry = 0;
  subspace::Method method = subspace::Method::qse;
  std::int64_t shots = 0;
  double kappa = 1.0;  // exact overlap condition number
  solve::Pairing pairing = solve::Pairing::rank;
  std::vector<solve::StateStatistics> states;
  std::size_t failed_reps = 0;
  std::size_t reps_with_missing = 0;

  double mean_abs_error_lowest(std::size_t k) const { return solve::mean_abs_error_lowest(states, k); }
};

/// Exact (infinite-shot) reference solution of one method on one geometry.
struct MethodReference {
  std::size_t geometry = 0;
  subspace::Method method = subspace::Method::qse;
  std::vector<double> energies;
  double kappa = 1.0;
  double threshold = 0.0;  // > 0 only if the exact problem needed one
  std::vector<std::size_t> tracked_fci;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<GeometryInfo> geometries;
  std::vector<MethodReference> references;
  std::vector<RepetitionRecord> records;
  std::vector<SummaryCell> summary;

  const SummaryCell* cell(std::size_t geometry, subspace::Method method, std::int64_t shots) const {
    for (const auto& c : summary)
      if (c.geometry == geometry && c.method == method && c.shots == shots) return &c;
    return nullptr;
  }
  const MethodReference* reference(std::size_t geometry, subspace::Method method) const {
    for (const auto& r : references)
      if (r.geometry == geometry && r.method == method) return &r;
    return nullptr;
  }
};

inline std::uint64_t method_index(subspace::Method m) { return static_cast<std::uint64_t>(m); }

/// Noise root seed for one (geometry, method) pair; element streams are
/// further keyed by repetition, shots and matrix indices.
inline std::uint64_t cell_seed(std::uint64_t root, std::size_t geometry, subspace::Method method) {
  return subspace::derive_seed(root, {static_cast<std::uint64_t>(geometry), method_index(method)});
}

namespace detail {

struct Solved {
  solve::GevpSolution solution;
  double threshold = 0.0;
};

inline Solved solve_with_policy(const subspace::SubspaceMatrices& m, const ThresholdPolicy& policy, double bound) {
  if (!m.s) return {solve::solve(m), 0.0};
  switch (policy.kind) {
    case ThresholdPolicy::Kind::none: return {solve::solve(m), 0.0};
    case ThresholdPolicy::Kind::fixed: return {solve::solve(m, {policy.epsilon, false}), policy.epsilon};
    default: {
      auto a = solve::auto_threshold(m.h, *m.s, m.energy_offset, bound);
      return {std::move(a.solution), a.threshold};
    }
  }
}

inline std::string status_of(const std::exception& e) {
  if (dynamic_cast<const IllConditioned*>(&e)) return "ill_conditioned";
  if (dynamic_cast<const EmptySubspace*>(&e)) return "empty_subspace";
  return "error";
}

}  // namespace detail

/// Full pipeline for every configured geometry, method and shots value.
/// Failures of individual repetitions are recorded, never rethrown.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  using clock = std::chrono::steady_clock;

  for (std::size_t gi = 0; gi < config.geometries.size(); ++gi) {
    const auto system = build_system(resolve_geometry(config.geometries[gi]));
    const auto ground = solve_ground_state(system);
    GeometryInfo info;
    info.spec = config.geometries[gi];
    info.e_rhf = system.rhf.total_energy;
    info.e_hf = ground.e_hf;
    info.e_vqe = ground.vqe.energy;
    info.vqe_iterations = ground.vqe.iterations;
    info.fci = reference_spectrum(system);
    const double bound = system.hamiltonian.one_norm();

    std::optional<subspace::QseSamplingPlan> qse_plan;
    std::optional<subspace::QsceomSamplingPlan> eom_plan;
    const auto qse_manifold = subspace::build_manifold(system.space, config.spin_policy, true);
    const auto eom_manifold = subspace::build_manifold(system.space, config.spin_policy, false);
    const subspace::QsceomOptions eom_options{config.offset, config.include_ground_row};

    for (const auto method : config.methods) {
      const bool is_eom = method == subspace::Method::qsceom;
      subspace::SubspaceMatrices exact =
          is_eom ? subspace::qsceom_matrix_exact(ground.ansatz, ground.theta(), eom_manifold, system.hamiltonian, eom_options)
                 : subspace::qse_matrices_exact(ground.psi, qse_manifold, system.hamiltonian);
      if (!is_eom) exact.method = method;

      MethodReference ref;
      ref.geometry = gi;
      ref.method = method;
      ref.kappa = exact.s ? solve::condition_number(*exact.s) : 1.0;
      try {
        ref.energies = solve::solve(exact).energies();
      } catch (const IllConditioned&) {
        auto a = solve::auto_threshold(exact.h, *exact.s, exact.energy_offset, bound);
        ref.energies = a.solution.energies();
        ref.threshold = a.threshold;
      }
      for (const auto& p : solve::match_states(ref.energies, info.fci, config.match_window).pairs)
        ref.tracked_fci.push_back(p.reference);
      std::sort(ref.tracked_fci.begin(), ref.tracked_fci.end());

      subspace::ShotNoiseModel noise;
      noise.kind = config.noise;
      noise.accounting = config.shot_accounting;
      noise.sample_imaginary = config.sample_imaginary;
      noise.seed = cell_seed(config.seed, gi, method);

      for (const auto shots : config.shots) {
        const auto& policy = config.threshold_for(shots);
        const int reps = shots == 0 ? 1 : config.repetitions;
        std::vector<std::optional<std::vector<double>>> rep_energies;
        SummaryCell cell;
        cell.geometry = gi;
        cell.method = method;
        cell.shots = shots;
        cell.kappa = ref.kappa;
        cell.pairing = policy.kind == ThresholdPolicy::Kind::none ? solve::Pairing::rank : solve::Pairing::match;

        for (int rep = 0; rep < reps; ++rep) {
          const auto t0 = clock::now();
          RepetitionRecord rec;
          rec.geometry = gi;
          rec.method = method;
          rec.shots = shots;
          rec.rep = rep;
          try {
            subspace::SubspaceMatrices m;
            if (shots == 0) {
              m = exact;
            } else {
              noise.shots_per_pauli_term = shots;
              if (is_eom) {
                if (!eom_plan)
                  eom_plan = subspace::build_qsceom_plan(ground.ansatz, ground.theta(), eom_manifold, system.hamiltonian,
                                                         eom_options);
                m = subspace::sample_qsceom(*eom_plan, noise, static_cast<std::uint64_t>(rep));
              } else {
                if (!qse_plan) qse_plan = subspace::build_qse_plan(ground.psi, qse_manifold, system.hamiltonian);
                m = subspace::sample_qse(*qse_plan, noise, static_cast<std::uint64_t>(rep), method);
              }
            }
            rec.overlap_kappa = m.s ? solve::condition_number(*m.s) : 1.0;
            auto solved = detail::solve_with_policy(m, policy, bound);
            rec.energies = solved.solution.energies();
            rec.threshold = solved.threshold;
            rec.retained_dim = solved.solution.retained_dim;
            rec.missing_states = solve::match_states(rec.energies, ref.energies, config.match_window).missing_reference_states;
            rep_energies.emplace_back(rec.energies);
          } catch (const Error& e) {
            rec.status = detail::status_of(e);
            rep_energies.emplace_back(std::nullopt);
          }
          rec.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
          if (!rec.missing_states.empty()) ++cell.reps_with_missing;
          if (!rec.ok()) ++cell.failed_reps;
          result.records.push_back(std::move(rec));
        }
        cell.states = solve::eigenvalue_statistics(rep_energies, ref.energies, cell.pairing, config.match_window);
        result.summary.push_back(std::move(cell));
      }
      result.references.push_back(std::move(ref));
    }
    result.geometries.push_back(std::move(info));
  }
  return result;
}

namespace detail {
inline std::string fmt(double v) { return std::isfinite(v) ? text::format_double(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }
}  // namespace detail

/// Long format: one row per eigenvalue per repetition; failed repetitions
/// get a single row with state -1.
inline std::string results_csv(const ExperimentResult& r) {
  std::ostringstream out;
  const auto hash = text::hex64(r.config.hash());
  out << "config_hash,version,seed,geometry,method,shots,rep,status,threshold,retained_dim,overlap_kappa,missing_states,state,"
         "energy_ha\n";
  for (const auto& rec : r.records) {
    std::ostringstream prefix;
    prefix << hash << ',' << kVersion << ',' << r.config.seed << ",\"" << r.geometries[rec.geometry].spec << "\","
           << subspace::to_string(rec.method) << ',' << rec.shots << ',' << rec.rep << ',' << rec.status << ','
           << detail::fmt(rec.threshold) << ',' << rec.retained_dim << ',' << detail::fmt(rec.overlap_kappa) << ','
           << rec.missing_states.size() << ',';
    if (!rec.ok()) {
      out << prefix.str() << "-1,nan\n";
      continue;
    }
    for (std::size_t k = 0; k < rec.energies.size(); ++k) out << prefix.str() << k << ',' << detail::fmt(rec.energies[k]) << '\n';
  }
  return out.str();
}

inline std::string summary_csv(const ExperimentResult& r) {
  std::ostringstream out;
  const auto hash = text::hex64(r.config.hash());
  out << "config_hash,version,seed,geometry,method,shots,kappa,pairing,state,exact_ha,samples,failed,missing,mean_ha,"
         "mean_error_ha,mean_abs_error_ha,variance_ha2\n";
  for (const auto& c : r.summary)
    for (const auto& s : c.states)
      out << hash << ',' << kVersion << ',' << r.config.seed << ",\"" << r.geometries[c.geometry].spec << "\","
          << subspace::to_string(c.method) << ',' << c.shots << ',' << detail::fmt(c.kappa) << ',' << solve::to_string(c.pairing)
          << ',' << s.reference_index << ',' << detail::fmt(s.reference_energy) << ',' << s.samples << ',' << s.failed << ','
          << s.missing << ',' << detail::fmt(s.mean_energy) << ',' << detail::fmt(s.mean_error) << ','
          << detail::fmt(s.mean_abs_error) << ',' << detail::fmt(s.variance) << '\n';
  return out.str();
}

/// Exact sector spectrum with the method-exact state each level is matched to.
inline std::string reference_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "config_hash,geometry,state,fci_ha";
  for (const auto m : r.config.methods) out << ',' << subspace::to_string(m) << "_tracked";
  out << '\n';
  const auto hash = text::hex64(r.config.hash());
  for (std::size_t g = 0; g < r.geometries.size(); ++g)
    for (std::size_t k = 0; k < r.geometries[g].fci.size(); ++k) {
      out << hash << ",\"" << r.geometries[g].spec << "\"," << k << ',' << detail::fmt(r.geometries[g].fci[k]);
      for (const auto m : r.config.methods) {
        const auto* ref = r.reference(g, m);
        const bool tracked = ref && std::find(ref->tracked_fci.begin(), ref->tracked_fci.end(), k) != ref->tracked_fci.end();
        out << ',' << (tracked ? 1 : 0);
      }
      out << '\n';
    }
  return out.str();
}

inline std::string timing_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "geometry,method,shots,rep,wall_seconds\n";
  for (const auto& rec : r.records)
    out << '"' << r.geometries[rec.geometry].spec << "\"," << subspace::to_string(rec.method) << ',' << rec.shots << ','
        << rec.rep << ',' << rec.wall_seconds << '\n';
  return out.str();
}

inline std::string manifest_txt(const ExperimentResult& r) {
  std::ostringstream out;
  out << "gevpnoise " << kVersion << "\n";
  out << "config_hash " << text::hex64(r.config.hash()) << "\n";
  out << "root_seed " << r.config.seed << "\n";
#if defined(__clang__)
  out << "compiler clang " << __clang_major__ << "." << __clang_minor__ << "\n";
#elif defined(__GNUC__)
  out << "compiler gcc " << __GNUC__ << "." << __GNUC_MINOR__ << "\n";
#endif
  out << "eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n";
  out << "\n[config]\n" << r.config.to_text();
  out << "\n[geometries]\n";
  for (std::size_t g = 0; g < r.geometries.size(); ++g) {
    const auto& info = r.geometries[g];
    out << g << " " << info.spec << " e_rhf=" << detail::fmt(info.e_rhf) << " e_hf=" << detail::fmt(info.e_hf)
        << " e_vqe=" << detail::fmt(info.e_vqe) << " vqe_iterations=" << info.vqe_iterations
        << " e_fci=" << detail::fmt(info.fci.empty() ? NAN : info.fci.front()) << "\n";
  }
  out << "\n[methods]\n";
  for (const auto& ref : r.references)
    out << ref.geometry << " " << subspace::to_string(ref.method) << " kappa=" << detail::fmt(ref.kappa)
        << " exact_threshold=" << detail::fmt(ref.threshold) << " tracked_states=" << ref.tracked_fci.size()
        << " noise_seed=" << cell_seed(r.config.seed, ref.geometry, ref.method) << "\n";
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

/// Writes results.csv, summary.csv, reference.csv, manifest.txt and timing.csv.
inline void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", results_csv(r));
  write_file(dir / "summary.csv", summary_csv(r));
  write_file(dir / "reference.csv", reference_csv(r));
  write_file(dir / "manifest.txt", manifest_txt(r));
  write_file(dir / "timing.csv", timing_csv(r));
}

}  // namespace gevpnoise::experiment
