#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "gevpnoise/chem/geometry.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/text.hpp"
#include "gevpnoise/qop/excitation.hpp"
#include "gevpnoise/solve/matching.hpp"
#include "gevpnoise/subspace/matrices.hpp"
#include "gevpnoise/subspace/noise.hpp"
#include "gevpnoise/subspace/qsceom.hpp"

namespace gevpnoise::experiment {

/// `square(a)`, `linear(a)`, `linear_custom(a,b,c)` (Å) or a path to an
/// `H x y z` file.
inline chem::Geometry resolve_geometry(const std::string& spec) {
  const auto s = std::string(text::trim(spec));
  const auto open = s.find('(');
  if (open != std::string::npos && !s.empty() && s.back() == ')') {
    const auto family = std::string(text::trim(std::string_view(s).substr(0, open)));
    std::vector<double> args;
    for (const auto& a : text::split(std::string_view(s).substr(open + 1, s.size() - open - 2), ','))
      args.push_back(text::parse_double(text::trim(a)));
    if (family == "square" && args.size() == 1) return chem::Geometry::square(args[0]);
    if (family == "linear" && args.size() == 1) return chem::Geometry::linear(args[0]);
    if (family == "linear_custom" && args.size() == 3) return chem::Geometry::linear_custom(args[0], args[1], args[2]);
    throw FormatError("unknown geometry family '" + s + "'");
  }
  return chem::Geometry::from_file(s);
}

struct ThresholdPolicy {
  enum class Kind { none, fixed, automatic };
  Kind kind = Kind::none;
  double epsilon = 0.0;

  static ThresholdPolicy parse(const std::string& s) {
    const auto t = std::string(text::trim(s));
    if (t == "none") return {};
    if (t == "auto") return {Kind::automatic, 0.0};
    if (t.rfind("fixed:", 0) == 0) {
      const double e = text::parse_double(t.substr(6));
      if (!(e >= 0.0)) throw FormatError("threshold must be >= 0");
      return {Kind::fixed, e};
    }
    throw FormatError("threshold must be none, auto or fixed:<eps>, got '" + t + "'");
  }
  std::string to_string() const {
    switch (kind) {
      case Kind::none: return "none";
      case Kind::automatic: return "auto";
      default: return "fixed:" + text::format_double(epsilon);
    }
  }
  bool operator==(const ThresholdPolicy&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::string> geometries;
  std::vector<subspace::Method> methods{subspace::Method::qse, subspace::Method::qsceom};
  std::vector<std::int64_t> shots{0};  // 0 = exact matrices
  int repetitions = 10;
  std::uint64_t seed = 0;
  ThresholdPolicy threshold;
  std::map<std::int64_t, ThresholdPolicy> threshold_by_shots;
  subspace::ShotAccounting shot_accounting = subspace::ShotAccounting::per_term;
  qop::SpinPolicy spin_policy = qop::SpinPolicy::sz_conserving;
  subspace::NoiseKind noise = subspace::NoiseKind::pauli_binomial;
  std::string output = "out";
  double match_window = solve::kDefaultMatchWindow;
  subspace::OffsetChoice offset = subspace::OffsetChoice::hf;
  bool include_ground_row = false;
  bool sample_imaginary = false;
  int report_states = 5;

  const ThresholdPolicy& threshold_for(std::int64_t n) const {
    auto it = threshold_by_shots.find(n);
    return it == threshold_by_shots.end() ? threshold : it->second;
  }

  void validate() const {
    if (geometries.empty()) throw DomainError("config: no geometry");
    if (methods.empty()) throw DomainError("config: no method");
    if (shots.empty()) throw DomainError("config: shots grid is empty");
    for (auto n : shots)
      if (n < 0) throw DomainError("config: shots must be >= 0");
    if (repetitions < 1) throw DomainError("config: repetitions must be >= 1");
    if (!(match_window > 0.0)) throw DomainError("config: match_window must be > 0");
    if (report_states < 1) throw DomainError("config: report_states must be >= 1");
  }

  /// Canonical text form; parse(to_text()) reproduces the config exactly.
  std::string to_text() const {
    std::ostringstream out;
    auto join = [](const auto& items, const char* sep, auto fmt) {
      std::string s;
      for (std::size_t i = 0; i < items.size(); ++i) s += (i ? sep : "") + fmt(items[i]);
      return s;
    };
    out << "name = " << name << "\n";
    out << "geometry = " << join(geometries, "; ", [](const std::string& g) { return g; }) << "\n";
    out << "method = " << join(methods, ", ", [](subspace::Method m) { return subspace::to_string(m); }) << "\n";
    out << "shots = " << join(shots, ", ", [](std::int64_t n) { return std::to_string(n); }) << "\n";
    out << "repetitions = " << repetitions << "\n";
    out << "seed = " << seed << "\n";
    out << "threshold = " << threshold.to_string() << "\n";
    for (const auto& [n, t] : threshold_by_shots) out << "threshold@" << n << " = " << t.to_string() << "\n";
    out << "shot_accounting = " << subspace::to_string(shot_accounting) << "\n";
    out << "spin_policy = " << qop::to_string(spin_policy) << "\n";
    out << "noise = " << subspace::to_string(noise) << "\n";
    out << "output = " << output << "\n";
    out << "match_window = " << text::format_double(match_window) << "\n";
    out << "offset = " << subspace::to_string(offset) << "\n";
    out << "include_ground_row = " << (include_ground_row ? "true" : "false") << "\n";
    out << "sample_imaginary = " << (sample_imaginary ? "true" : "false") << "\n";
    out << "report_states = " << report_states << "\n";
    return out.str();
  }

  std::uint64_t hash() const { return text::fnv1a(to_text()); }

  bool operator==(const ExperimentConfig&) const = default;

  static ExperimentConfig parse(std::string_view content) {
    ExperimentConfig c;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(content, '\n')) {
      ++line_no;
      const auto line = text::trim(text::strip_comment(raw));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
      const auto key = std::string(text::trim(line.substr(0, eq)));
      const auto value = std::string(text::trim(line.substr(eq + 1)));
      try {
        c.set(key, value);
      } catch (const std::logic_error&) {
        throw FormatError("config line " + std::to_string(line_no) + ": bad value for '" + key + "'");
      }
    }
    c.validate();
    return c;
  }

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  /// Applies one `key = value` setting (also used for command-line overrides).
  void set(const std::string& key, const std::string& value) {
    auto list = [](const std::string& v, char sep) {
      std::vector<std::string> out;
      for (const auto& item : text::split(v, sep)) {
        const auto t = std::string(text::trim(item));
        if (!t.empty()) out.push_back(t);
      }
      return out;
    };
    auto boolean = [&](const std::string& v) {
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      throw FormatError("config: '" + key + "' expects true or false");
    };
    if (key == "name") name = value;
    else if (key == "geometry") geometries = list(value, ';');
    else if (key == "method") {
      methods.clear();
      for (const auto& m : list(value, ',')) methods.push_back(subspace::method_from_string(m));
    } else if (key == "shots") {
      shots.clear();
      for (const auto& n : list(value, ',')) shots.push_back(std::stoll(n));
    } else if (key == "repetitions") repetitions = std::stoi(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "threshold") threshold = ThresholdPolicy::parse(value);
    else if (key.rfind("threshold@", 0) == 0) threshold_by_shots[std::stoll(key.substr(10))] = ThresholdPolicy::parse(value);
    else if (key == "shot_accounting") shot_accounting = subspace::shot_accounting_from_string(value);
    else if (key == "spin_policy") spin_policy = qop::spin_policy_from_string(value);
    else if (key == "noise") noise = subspace::noise_kind_from_string(value);
    else if (key == "output") output = value;
    else if (key == "match_window") match_window = text::parse_double(value);
    else if (key == "offset") offset = subspace::offset_choice_from_string(value);
    else if (key == "include_ground_row") include_ground_row = boolean(value);
    else if (key == "sample_imaginary") sample_imaginary = boolean(value);
    else if (key == "report_states") report_states = std::stoi(value);
    else throw FormatError("config: unknown key '" + key + "'");
  }
};

}  // namespace gevpnoise::experiment
