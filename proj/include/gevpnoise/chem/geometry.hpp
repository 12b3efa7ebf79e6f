#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/text.hpp"

namespace gevpnoise::chem {

struct Atom {
  std::string element;
  std::array<double, 3> position{};  // Å

  bool operator==(const Atom&) const = default;
};

/// Hydrogen-only molecular geometry in Ångström.
///
/// File format: one atom per line, `H x y z`; `#` starts a comment.
class Geometry {
 public:
  static constexpr double kMinSeparation = 1e-6;  // Å

  Geometry() = default;
  explicit Geometry(std::vector<Atom> atoms) : atoms_(std::move(atoms)) { validate(); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  // Hydrogen nuclear charge summed over atoms.
  int total_nuclear_charge() const noexcept { return static_cast<int>(atoms_.size()); }

  Geometry translated(double dx, double dy, double dz) const {
    auto atoms = atoms_;
    for (auto& a : atoms) {
      a.position[0] += dx;
      a.position[1] += dy;
      a.position[2] += dz;
    }
    return Geometry(std::move(atoms));
  }

  std::string to_string() const {
    std::string out;
    for (const auto& a : atoms_) {
      out += a.element;
      for (double c : a.position) out += " " + text::format_double(c);
      out += "\n";
    }
    return out;
  }

  static Geometry parse(std::string_view content) {
    std::vector<Atom> atoms;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
      const auto end = content.find('\n', start);
      const auto line = content.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
      ++line_no;
      const auto fields = text::split_whitespace(text::strip_comment(line));
      if (!fields.empty()) {
        if (fields.size() != 4)
          throw FormatError("geometry line " + std::to_string(line_no) + ": expected 'H x y z'");
        Atom atom;
        atom.element = fields[0];
        for (int k = 0; k < 3; ++k) atom.position[k] = text::parse_double(fields[k + 1]);
        atoms.push_back(std::move(atom));
      }
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    return Geometry(std::move(atoms));
  }

  static Geometry from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open geometry file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  // Square of four atoms with the given side length in the xy-plane.
  static Geometry square(double side) {
    return Geometry({{"H", {0, 0, 0}}, {"H", {side, 0, 0}}, {"H", {side, side, 0}}, {"H", {0, side, 0}}});
  }

  // Four collinear atoms with equal spacing along z.
  static Geometry linear(double spacing) { return linear_custom(spacing, spacing, spacing); }

  // Four collinear atoms with successive spacings d1, d2, d3 along z.
  static Geometry linear_custom(double d1, double d2, double d3) {
    return Geometry({{"H", {0, 0, 0}}, {"H", {0, 0, d1}}, {"H", {0, 0, d1 + d2}}, {"H", {0, 0, d1 + d2 + d3}}});
  }

  bool operator==(const Geometry&) const = default;

 private:
  void validate() const {
    if (atoms_.size() < 2) throw DegenerateGeometry("geometry needs at least 2 atoms");
    for (const auto& a : atoms_) {
      if (a.element != "H") throw DomainError("unsupported element '" + a.element + "' (hydrogen only)");
      for (double c : a.position)
        if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
        double r2 = 0;
        for (int k = 0; k < 3; ++k) {
          const double d = atoms_[i].position[k] - atoms_[j].position[k];
          r2 += d * d;
        }
        if (std::sqrt(r2) < kMinSeparation)
          throw DegenerateGeometry("atoms " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
  }

  std::vector<Atom> atoms_;
};

}  // namespace gevpnoise::chem
