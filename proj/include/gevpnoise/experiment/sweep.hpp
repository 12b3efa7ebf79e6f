#pragma once

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gevpnoise/experiment/runner.hpp"
#include "gevpnoise/solve/statistics.hpp"

namespace gevpnoise::experiment {

struct SweepRow {
  std::size_t geometry = 0;
  subspace::Method method = subspace::Method::qse;
  std::int64_t shots = 0;
  double kappa = 1.0;
  double ground_mean_abs_error = 0.0;  // Hartree
  double ground_variance = 0.0;
  double lowest_mean_abs_error = 0.0;  // over report_states states
  std::size_t failed_reps = 0;
};

struct SweepTrend {
  subspace::Method method = subspace::Method::qse;
  std::int64_t shots = 0;
  double spearman_ground = 0.0;  // rank correlation of κ with the ground-state error
  double spread_lowest = 0.0;    // max/min of the lowest-states error across geometries
};

struct SweepResult {
  ExperimentResult experiment;
  std::vector<SweepRow> rows;      // geometry order within (method, shots)
  std::vector<SweepTrend> trends;
};

/// Runs every geometry of the config and joins the per-geometry errors with the
/// exact overlap condition number. The trend uses the QSE κ of each geometry
/// for every method so rows of different methods are comparable.
inline SweepResult condition_sweep(const ExperimentConfig& config) {
  if (config.geometries.size() < 3) throw DomainError("condition_sweep: needs at least 3 geometries");
  SweepResult out;
  out.experiment = run_experiment(config);
  const auto& ex = out.experiment;
  const auto k = static_cast<std::size_t>(config.report_states);
  for (const auto method : config.methods)
    for (const auto shots : config.shots) {
      std::vector<double> kappas, ground, lowest;
      for (std::size_t g = 0; g < ex.geometries.size(); ++g) {
        const auto* cell = ex.cell(g, method, shots);
        if (!cell) continue;
        SweepRow row;
        row.geometry = g;
        row.method = method;
        row.shots = shots;
        row.kappa = cell->kappa;
        if (!cell->states.empty()) {
          row.ground_mean_abs_error = cell->states.front().mean_abs_error;
          row.ground_variance = cell->states.front().variance;
        }
        row.lowest_mean_abs_error = cell->mean_abs_error_lowest(k);
        row.failed_reps = cell->failed_reps;
        out.rows.push_back(row);
        const auto* qse = ex.reference(g, subspace::Method::qse);
        kappas.push_back(qse ? qse->kappa : row.kappa);
        ground.push_back(row.ground_mean_abs_error);
        lowest.push_back(row.lowest_mean_abs_error);
      }
      if (kappas.size() < 2) continue;
      SweepTrend t;
      t.method = method;
      t.shots = shots;
      t.spearman_ground = solve::spearman(kappas, ground);
      const auto [lo, hi] = std::minmax_element(lowest.begin(), lowest.end());
      t.spread_lowest = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
      out.trends.push_back(t);
    }
  return out;
}

inline std::string sweep_csv(const SweepResult& s) {
  std::ostringstream out;
  const auto& ex = s.experiment;
  out << "config_hash,version,seed,geometry,method,shots,kappa,ground_mean_abs_error_ha,ground_variance_ha2,"
         "lowest_mean_abs_error_ha,failed\n";
  for (const auto& r : s.rows)
    out << text::hex64(ex.config.hash()) << ',' << kVersion << ',' << ex.config.seed << ",\"" << ex.geometries[r.geometry].spec
        << "\"," << subspace::to_string(r.method) << ',' << r.shots << ',' << detail::fmt(r.kappa) << ','
        << detail::fmt(r.ground_mean_abs_error) << ',' << detail::fmt(r.ground_variance) << ','
        << detail::fmt(r.lowest_mean_abs_error) << ',' << r.failed_reps << '\n';
  return out.str();
}

inline std::string trend_csv(const SweepResult& s) {
  std::ostringstream out;
  out << "config_hash,method,shots,spearman_kappa_ground_error,lowest_error_spread\n";
  for (const auto& t : s.trends)
    out << text::hex64(s.experiment.config.hash()) << ',' << subspace::to_string(t.method) << ',' << t.shots << ','
        << detail::fmt(t.spearman_ground) << ',' << detail::fmt(t.spread_lowest) << '\n';
  return out.str();
}

inline void write_sweep_outputs(const SweepResult& s, const std::filesystem::path& dir) {
  write_outputs(s.experiment, dir);
  write_file(dir / "sweep.csv", sweep_csv(s));
  write_file(dir / "trend.csv", trend_csv(s));
}

}  // namespace gevpnoise::experiment
