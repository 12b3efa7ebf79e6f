#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "gevpnoise/core/csv.hpp"
#include "gevpnoise/experiment/config.hpp"
#include "gevpnoise/experiment/invariants.hpp"
#include "gevpnoise/experiment/plot.hpp"
#include "gevpnoise/experiment/runner.hpp"
#include "gevpnoise/experiment/sweep.hpp"

using namespace gevpnoise;
namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out, method, shots, threshold, spin_policy, geometry;
  std::optional<int> reps;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config file");
  cmd->add_option("--seed", o.seed, "root seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--method", o.method, "comma-separated: qse, qsceom, qse_exact_overlap");
  cmd->add_option("--shots", o.shots, "comma-separated shots per Pauli term (0 = exact)");
  cmd->add_option("--reps", o.reps, "repetitions per shots value");
  cmd->add_option("--threshold", o.threshold, "none | auto | fixed:<eps>");
  cmd->add_option("--spin-policy", o.spin_policy, "sz_conserving | unrestricted");
  cmd->add_option("--geometry", o.geometry, "geometry spec(s), ';'-separated");
}

experiment::ExperimentConfig load(const Overrides& o) {
  experiment::ExperimentConfig c;
  if (!o.config.empty()) c = experiment::ExperimentConfig::from_file(o.config);
  if (o.seed) c.seed = *o.seed;
  if (const char* env = std::getenv("GEVPNOISE_OUT")) c.output = env;
  if (!o.out.empty()) c.output = o.out;
  if (!o.method.empty()) c.set("method", o.method);
  if (!o.shots.empty()) c.set("shots", o.shots);
  if (o.reps) c.repetitions = *o.reps;
  if (!o.threshold.empty()) {
    c.set("threshold", o.threshold);
    c.threshold_by_shots.clear();
  }
  if (!o.spin_policy.empty()) c.set("spin_policy", o.spin_policy);
  if (!o.geometry.empty()) c.set("geometry", o.geometry);
  c.validate();
  return c;
}

void print_summary(const experiment::ExperimentResult& r) {
  for (const auto& cell : r.summary) {
    std::printf("%-28s %-18s shots=%-7lld kappa=%-12.4g failed=%zu  MAE(lowest %d) = %.3e eV\n",
                r.geometries[cell.geometry].spec.c_str(), subspace::to_string(cell.method).c_str(),
                static_cast<long long>(cell.shots), cell.kappa, cell.failed_reps, r.config.report_states,
                cell.mean_abs_error_lowest(static_cast<std::size_t>(r.config.report_states)) * units::kHartreeToEv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shot-noise study of subspace excited-state methods for hydrogen chains"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o;
  auto* run = app.add_subcommand("run", "run one experiment");
  add_overrides(run, run_o);
  auto* sweep = app.add_subcommand("sweep", "condition-number sweep over >= 3 geometries");
  add_overrides(sweep, sweep_o);

  std::string plot_csv, plot_kind = "energy_vs_shots", plot_out = ".";
  int plot_states = 5;
  bool plot_hartree = false;
  auto* plot = app.add_subcommand("plot", "render summary.csv as SVG");
  plot->add_option("csv", plot_csv, "summary.csv")->required();
  plot->add_option("--kind", plot_kind, "energy_vs_shots | error_vs_shots | spectrum_compare | all");
  plot->add_option("--out", plot_out, "output directory");
  plot->add_option("--states", plot_states, "number of lowest states");
  plot->add_flag("--hartree", plot_hartree, "errors in Hartree instead of eV");

  std::string oracle_geometry;
  bool oracle_all = false;
  auto* oracle = app.add_subcommand("oracle", "print exact energies for a geometry");
  oracle->add_option("geometry", oracle_geometry, "square(a) | linear(a) | linear_custom(a,b,c) | file")->required();
  oracle->add_flag("--all", oracle_all, "all sectors instead of (N, Sz = 0)");

  auto* validate = app.add_subcommand("validate", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto config = load(run_o);
      const auto result = experiment::run_experiment(config);
      experiment::write_outputs(result, config.output);
      print_summary(result);
      std::cout << "wrote " << config.output << "\n";
    } else if (sweep->parsed()) {
      const auto config = load(sweep_o);
      const auto result = experiment::condition_sweep(config);
      experiment::write_sweep_outputs(result, config.output);
      print_summary(result.experiment);
      for (const auto& t : result.trends)
        std::printf("trend %-18s shots=%-7lld spearman(kappa, ground error) = %+.3f  spread = %.3f\n",
                    subspace::to_string(t.method).c_str(), static_cast<long long>(t.shots), t.spearman_ground,
                    t.spread_lowest);
      std::cout << "wrote " << config.output << "\n";
    } else if (plot->parsed()) {
      std::ifstream in(plot_csv);
      if (!in) throw FormatError("cannot open " + plot_csv);
      std::stringstream ss;
      ss << in.rdbuf();
      std::vector<experiment::PlotKind> kinds;
      if (plot_kind == "all")
        kinds = {experiment::PlotKind::energy_vs_shots, experiment::PlotKind::error_vs_shots,
                 experiment::PlotKind::spectrum_compare};
      else
        kinds = {experiment::plot_kind_from_string(plot_kind)};
      fs::create_directories(plot_out);
      for (auto k : kinds)
        for (const auto& f : experiment::emit_plot(ss.str(), k, {plot_states, !plot_hartree})) {
          const auto path = fs::path(plot_out) / (f.name + ".svg");
          experiment::write_file(path, f.svg);
          std::cout << path.string() << "\n";
        }
    } else if (oracle->parsed()) {
      const auto system = experiment::build_system(experiment::resolve_geometry(oracle_geometry));
      std::printf("# RHF %.10f Ha  (%s)\n", system.rhf.total_energy, system.rhf.diis ? "diis" : "damped");
      const auto spectrum = oracle_all ? sim::exact_spectrum(system.hamiltonian)
                                       : sim::exact_spectrum(system.hamiltonian, system.ground_sector());
      std::cout << "state,energy_ha,energy_ev\n";
      for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k)
        std::printf("%zu,%s,%s\n", k, text::format_double(spectrum.eigenvalues[k]).c_str(),
                    text::format_double(spectrum.eigenvalues[k] * units::kHartreeToEv).c_str());
    } else if (validate->parsed()) {
      bool ok = true;
      for (const auto& c : experiment::run_invariant_suite()) {
        std::printf("%s %s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        ok = ok && c.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
