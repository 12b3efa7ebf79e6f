#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gevpnoise/chem/geometry.hpp"
#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/core/text.hpp"

#ifndef GEVPNOISE_DATA_DIR
#define GEVPNOISE_DATA_DIR "data"
#endif

namespace gevpnoise::chem {

struct Primitive {
  double exponent;     // 1/Bohr^2
  double coefficient;  // multiplies a normalized primitive
};

/// Contracted s-type Gaussian centered on an atom.
struct BasisShell {
  Vec3 center;  // Bohr
  std::vector<Primitive> primitives;
};

/// Overlap of two normalized s primitives.
inline double primitive_overlap(double a, const Vec3& A, double b, const Vec3& B) {
  const double p = a + b;
  const double norm = std::pow(4.0 * a * b / (std::numbers::pi * std::numbers::pi), 0.75);
  return norm * std::pow(std::numbers::pi / p, 1.5) * std::exp(-a * b / p * (A - B).squaredNorm());
}

inline double contracted_self_overlap(const std::vector<Primitive>& prims) {
  const Vec3 origin = Vec3::Zero();
  double s = 0;
  for (const auto& p : prims)
    for (const auto& q : prims)
      s += p.coefficient * q.coefficient * primitive_overlap(p.exponent, origin, q.exponent, origin);
  return s;
}

/// Per-element contraction data read from a basis file.
///
/// File format: blocks introduced by `<element> S <count>` followed by `count`
/// lines of `<exponent> <coefficient>`. Coefficients are rescaled on load so
/// each contracted function has unit self-overlap.
class BasisLibrary {
 public:
  static BasisLibrary parse(std::string_view content) {
    BasisLibrary lib;
    std::vector<std::string> lines;
    for (auto& l : text::split(content, '\n')) {
      auto t = std::string(text::trim(text::strip_comment(l)));
      if (!t.empty()) lines.push_back(std::move(t));
    }
    std::size_t i = 0;
    while (i < lines.size()) {
      const auto head = text::split_whitespace(lines[i]);
      if (head.size() != 3 || head[1] != "S") throw FormatError("basis: expected '<element> S <count>' at '" + lines[i] + "'");
      const auto count = static_cast<std::size_t>(std::stoul(head[2]));
      if (count == 0 || i + count >= lines.size() + 1) throw FormatError("basis: bad primitive count for " + head[0]);
      std::vector<Primitive> prims;
      for (std::size_t k = 1; k <= count; ++k) {
        if (i + k >= lines.size()) throw FormatError("basis: truncated block for " + head[0]);
        const auto f = text::split_whitespace(lines[i + k]);
        if (f.size() != 2) throw FormatError("basis: expected '<exponent> <coefficient>'");
        prims.push_back({text::parse_double(f[0]), text::parse_double(f[1])});
      }
      const double scale = 1.0 / std::sqrt(contracted_self_overlap(prims));
      for (auto& p : prims) p.coefficient *= scale;
      lib.shells_[head[0]].push_back(std::move(prims));
      i += count + 1;
    }
    return lib;
  }

  static BasisLibrary from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open basis file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static BasisLibrary sto3g() { return from_file(std::string(GEVPNOISE_DATA_DIR) + "/sto-3g.basis"); }

  /// One shell per contracted function for every atom, in atom order.
  std::vector<BasisShell> shells_for(const Geometry& geometry) const {
    std::vector<BasisShell> out;
    for (const auto& atom : geometry.atoms()) {
      auto it = shells_.find(atom.element);
      if (it == shells_.end()) throw DomainError("no basis data for element " + atom.element);
      const Vec3 center = Vec3(atom.position[0], atom.position[1], atom.position[2]) * units::kAngstromToBohr;
      for (const auto& prims : it->second) out.push_back({center, prims});
    }
    return out;
  }

 private:
  std::map<std::string, std::vector<std::vector<Primitive>>> shells_;
};

}  // namespace gevpnoise::chem
