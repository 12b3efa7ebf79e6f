#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/csv.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/text.hpp"

namespace gevpnoise::experiment {

enum class PlotKind { energy_vs_shots, error_vs_shots, spectrum_compare };

inline std::string to_string(PlotKind k) {
  switch (k) {
    case PlotKind::energy_vs_shots: return "energy_vs_shots";
    case PlotKind::error_vs_shots: return "error_vs_shots";
    default: return "spectrum_compare";
  }
}
inline PlotKind plot_kind_from_string(const std::string& s) {
  if (s == "energy_vs_shots") return PlotKind::energy_vs_shots;
  if (s == "error_vs_shots") return PlotKind::error_vs_shots;
  if (s == "spectrum_compare") return PlotKind::spectrum_compare;
  throw FormatError("unknown plot kind '" + s + "'");
}

struct PlotOptions {
  int max_states = 5;
  bool error_in_ev = true;
};

struct SvgFile {
  std::string name;  // file stem, e.g. energy_vs_shots_0_qse
  std::string svg;
};

namespace plot_detail {

struct Point {
  long long shots = 0;
  bool defined = false;
  double mean = 0, sd = 0, abs_error = 0;
};

struct Series {
  int state = 0;
  double exact = 0;
  bool missing = false;  // no statistics for at least one shots value
  std::vector<Point> points;
};

struct Group {
  std::string geometry, method;
  std::vector<Series> series;
};

inline double num(const std::string& s) { return text::parse_double(s); }

inline std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

inline const char* color(int k) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[k % 10];
}

inline std::vector<Group> read_groups(const csv::Table& t, int max_states) {
  const auto cg = t.column("geometry"), cm = t.column("method"), cs = t.column("shots"), ck = t.column("state"),
             ce = t.column("exact_ha"), cn = t.column("samples"), cmean = t.column("mean_ha"),
             cv = t.column("variance_ha2"), ca = t.column("mean_abs_error_ha");
  std::vector<Group> groups;
  for (const auto& row : t.rows) {
    const int state = std::stoi(row[ck]);
    if (state >= max_states) continue;
    auto git = std::find_if(groups.begin(), groups.end(),
                            [&](const Group& g) { return g.geometry == row[cg] && g.method == row[cm]; });
    if (git == groups.end()) {
      groups.push_back({row[cg], row[cm], {}});
      git = groups.end() - 1;
    }
    auto sit = std::find_if(git->series.begin(), git->series.end(), [&](const Series& s) { return s.state == state; });
    if (sit == git->series.end()) {
      git->series.push_back({state, num(row[ce]), false, {}});
      sit = git->series.end() - 1;
    }
    Point p;
    p.shots = std::stoll(row[cs]);
    p.defined = std::stoll(row[cn]) > 0;
    if (p.defined) {
      p.mean = num(row[cmean]);
      const double v = num(row[cv]);
      p.sd = std::isfinite(v) && v > 0 ? std::sqrt(v) : 0.0;
      p.abs_error = num(row[ca]);
    } else {
      sit->missing = true;
    }
    sit->points.push_back(p);
  }
  for (auto& g : groups) std::sort(g.series.begin(), g.series.end(), [](const Series& a, const Series& b) { return a.state < b.state; });
  return groups;
}

/// Axis-aligned plot frame mapping data to pixels.
struct Frame {
  double left = 80, right = 600, top = 40, bottom = 420;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double px(double x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
  double py(double y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
};

inline void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double d = std::max(std::abs(lo) * 0.01, 1e-3);
    lo -= d;
    hi += d;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

inline std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"480\" viewBox=\"0 0 760 480\">\n"
         "<rect x=\"0\" y=\"0\" width=\"760\" height=\"480\" fill=\"white\"/>\n"
         "<text x=\"340\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<rect x=\"" + f2(f.left) + "\" y=\"" + f2(f.top) + "\" width=\"" + f2(f.right - f.left) + "\" height=\"" +
       f2(f.bottom - f.top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + f2(0.5 * (f.left + f.right)) + "\" y=\"465\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
       escape(xlabel) + "</text>\n";
  s += "<text x=\"18\" y=\"" + f2(0.5 * (f.top + f.bottom)) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 " +
       f2(0.5 * (f.top + f.bottom)) + ")\">" + escape(ylabel) + "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    s += "<text x=\"" + f2(f.left - 6) + "\" y=\"" + f2(f.py(y) + 4) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
         label(y) + "</text>\n";
  }
  return s;
}

inline std::string marker(double x, double y, double y_lo, double y_hi, const char* c) {
  std::string s;
  s += "<line x1=\"" + f2(x) + "\" y1=\"" + f2(y_lo) + "\" x2=\"" + f2(x) + "\" y2=\"" + f2(y_hi) + "\" stroke=\"" + c +
       "\" stroke-width=\"1.5\"/>\n";
  s += "<circle cx=\"" + f2(x) + "\" cy=\"" + f2(y) + "\" r=\"4\" fill=\"" + c + "\"/>\n";
  return s;
}

inline std::string legend(const std::vector<Series>& series) {
  std::string s;
  double y = 50;
  for (const auto& se : series) {
    s += "<line x1=\"612\" y1=\"" + f2(y) + "\" x2=\"632\" y2=\"" + f2(y) + "\" stroke=\"" + color(se.state) + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"638\" y=\"" + f2(y + 4) + "\" font-family=\"sans-serif\" font-size=\"11\">state " + std::to_string(se.state) +
         (se.missing ? " (missing)" : "") + "</text>\n";
    y += 18;
  }
  return s;
}

inline std::vector<long long> shots_values(const Group& g) {
  std::vector<long long> v;
  for (const auto& s : g.series)
    for (const auto& p : s.points)
      if (p.shots > 0 && std::find(v.begin(), v.end(), p.shots) == v.end()) v.push_back(p.shots);
  std::sort(v.begin(), v.end());
  return v;
}

inline void log_x_range(const std::vector<long long>& shots, Frame& f) {
  if (shots.empty()) {
    f.x0 = 0;
    f.x1 = 1;
    return;
  }
  f.x0 = std::log10(static_cast<double>(shots.front())) - 0.5;
  f.x1 = std::log10(static_cast<double>(shots.back())) + 0.5;
}

inline std::string x_ticks(const Frame& f, const std::vector<long long>& shots) {
  std::string s;
  for (auto n : shots) {
    const double x = f.px(std::log10(static_cast<double>(n)));
    s += "<text x=\"" + f2(x) + "\" y=\"" + f2(f.bottom + 16) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
         std::to_string(n) + "</text>\n";
  }
  return s;
}

inline std::string energy_plot(const Group& g) {
  Frame f;
  const auto shots = shots_values(g);
  log_x_range(shots, f);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : g.series) {
    lo = std::min(lo, s.exact);
    hi = std::max(hi, s.exact);
    for (const auto& p : s.points)
      if (p.defined && p.shots > 0) {
        lo = std::min(lo, p.mean - p.sd);
        hi = std::max(hi, p.mean + p.sd);
      }
  }
  pad_range(lo, hi);
  f.y0 = lo;
  f.y1 = hi;
  std::string svg = header("Energy vs shots: " + g.method + ", " + g.geometry);
  svg += axes(f, "shots per Pauli term (log scale)", "energy (Hartree)");
  svg += x_ticks(f, shots);
  for (const auto& s : g.series) {
    svg += "<line x1=\"" + f2(f.left) + "\" y1=\"" + f2(f.py(s.exact)) + "\" x2=\"" + f2(f.right) + "\" y2=\"" + f2(f.py(s.exact)) +
           "\" stroke=\"" + color(s.state) + "\" stroke-width=\"1\"/>\n";
    for (const auto& p : s.points) {
      if (!p.defined || p.shots <= 0) continue;
      const double x = f.px(std::log10(static_cast<double>(p.shots)));
      svg += marker(x, f.py(p.mean), f.py(p.mean - p.sd), f.py(p.mean + p.sd), color(s.state));
    }
  }
  svg += legend(g.series);
  return svg + "</svg>\n";
}

inline std::string error_plot(const Group& g, bool ev) {
  Frame f;
  const auto shots = shots_values(g);
  log_x_range(shots, f);
  const double scale = ev ? units::kHartreeToEv : 1.0;
  double hi = 0.0;
  for (const auto& s : g.series)
    for (const auto& p : s.points)
      if (p.defined && p.shots > 0) hi = std::max(hi, scale * (p.abs_error + p.sd));
  double lo = 0.0;
  pad_range(lo, hi);
  f.y0 = lo;
  f.y1 = hi;
  std::string svg = header("Mean absolute error vs shots: " + g.method + ", " + g.geometry);
  svg += axes(f, "shots per Pauli term (log scale)", ev ? "mean absolute error (eV)" : "mean absolute error (Hartree)");
  svg += x_ticks(f, shots);
  svg += "<line x1=\"" + f2(f.left) + "\" y1=\"" + f2(f.py(0)) + "\" x2=\"" + f2(f.right) + "\" y2=\"" + f2(f.py(0)) +
         "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& s : g.series)
    for (const auto& p : s.points) {
      if (!p.defined || p.shots <= 0) continue;
      const double x = f.px(std::log10(static_cast<double>(p.shots)));
      const double y = scale * p.abs_error, d = scale * p.sd;
      svg += marker(x, f.py(y), f.py(std::max(0.0, y - d)), f.py(y + d), color(s.state));
    }
  svg += legend(g.series);
  return svg + "</svg>\n";
}

inline std::string spectrum_plot(const Group& g) {
  Frame f;
  const auto shots = shots_values(g);
  f.x0 = 0;
  f.x1 = static_cast<double>(shots.size() + 1);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : g.series) {
    lo = std::min(lo, s.exact);
    hi = std::max(hi, s.exact);
    for (const auto& p : s.points)
      if (p.defined && p.shots > 0) {
        lo = std::min(lo, p.mean - p.sd);
        hi = std::max(hi, p.mean + p.sd);
      }
  }
  pad_range(lo, hi);
  f.y0 = lo;
  f.y1 = hi;
  std::string svg = header("Spectrum: " + g.method + ", " + g.geometry);
  svg += axes(f, "exact | shots per Pauli term", "energy (Hartree)");
  auto column_x = [&](std::size_t c) { return f.px(0.5 + static_cast<double>(c)); };
  svg += "<text x=\"" + f2(column_x(0)) + "\" y=\"" + f2(f.bottom + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">exact</text>\n";
  for (std::size_t c = 0; c < shots.size(); ++c)
    svg += "<text x=\"" + f2(column_x(c + 1)) + "\" y=\"" + f2(f.bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + std::to_string(shots[c]) + "</text>\n";
  for (const auto& s : g.series) {
    const double y = f.py(s.exact);
    svg += "<line x1=\"" + f2(column_x(0) - 20) + "\" y1=\"" + f2(y) + "\" x2=\"" + f2(column_x(0) + 20) + "\" y2=\"" + f2(y) +
           "\" stroke=\"" + color(s.state) + "\" stroke-width=\"2\"/>\n";
    for (std::size_t c = 0; c < shots.size(); ++c) {
      auto it = std::find_if(s.points.begin(), s.points.end(), [&](const Point& p) { return p.shots == shots[c]; });
      if (it == s.points.end()) continue;
      if (!it->defined) {
        svg += "<text x=\"" + f2(column_x(c + 1)) + "\" y=\"" + f2(y + 4) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\" fill=\"" +
               color(s.state) + "\">missing</text>\n";
        continue;
      }
      svg += marker(column_x(c + 1), f.py(it->mean), f.py(it->mean - it->sd), f.py(it->mean + it->sd), color(s.state));
    }
  }
  svg += legend(g.series);
  return svg + "</svg>\n";
}

inline std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') out += c;
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

}  // namespace plot_detail

/// Renders one SVG per (geometry, method) group of a summary.csv.
inline std::vector<SvgFile> emit_plot(std::string_view summary_csv, PlotKind kind, const PlotOptions& options = {}) {
  const auto table = csv::Table::parse(summary_csv);
  const auto groups = plot_detail::read_groups(table, options.max_states);
  if (groups.empty()) throw FormatError("emit_plot: no rows to plot");
  std::vector<SvgFile> out;
  for (const auto& g : groups) {
    SvgFile f;
    f.name = to_string(kind) + "_" + plot_detail::slug(g.geometry) + "_" + g.method;
    switch (kind) {
      case PlotKind::energy_vs_shots: f.svg = plot_detail::energy_plot(g); break;
      case PlotKind::error_vs_shots: f.svg = plot_detail::error_plot(g, options.error_in_ev); break;
      default: f.svg = plot_detail::spectrum_plot(g); break;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace gevpnoise::experiment
