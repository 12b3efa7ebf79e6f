#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/core/text.hpp"
#include "gevpnoise/subspace/noise.hpp"

namespace gevpnoise::subspace {

enum class Method { qse, qsceom, qse_exact_overlap };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::qse: return "qse";
    case Method::qsceom: return "qsceom";
    default: return "qse_exact_overlap";
  }
}
inline Method method_from_string(const std::string& s) {
  if (s == "qse") return Method::qse;
  if (s == "qsceom") return Method::qsceom;
  if (s == "qse_exact_overlap") return Method::qse_exact_overlap;
  throw FormatError("unknown method '" + s + "'");
}

struct Provenance {
  bool sampled = false;
  std::int64_t shots_per_element = 0;  // 0 for exact
  std::string noise_model = "none";
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

/// Subspace Hamiltonian (and overlap for QSE-type methods). For q-sc-EOM the
/// stored h excludes `energy_offset`; add it back to obtain total energies.
struct SubspaceMatrices {
  ComplexMatrix h;
  std::optional<ComplexMatrix> s;
  Provenance provenance;
  Method method = Method::qse;
  std::string manifold_policy = "sz_conserving";
  double energy_offset = 0.0;

  Eigen::Index dim() const noexcept { return h.rows(); }
};

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// CSV dump: `# key=value` metadata lines, then `matrix,row,col,re,im` rows in
/// row-major order. Doubles use the shortest round-trip representation.
inline std::string to_csv(const SubspaceMatrices& m) {
  std::ostringstream out;
  out << "# gevpnoise subspace matrices v1\n";
  out << "# method=" << to_string(m.method) << "\n";
  out << "# provenance=" << (m.provenance.sampled ? "sampled" : "exact") << "\n";
  out << "# shots=" << m.provenance.shots_per_element << "\n";
  out << "# noise_model=" << m.provenance.noise_model << "\n";
  out << "# seed=" << m.provenance.seed << "\n";
  out << "# manifold_policy=" << m.manifold_policy << "\n";
  out << "# energy_offset=" << text::format_double(m.energy_offset) << "\n";
  out << "# dim=" << m.dim() << "\n";
  out << "matrix,row,col,re,im\n";
  auto dump = [&](const char* name, const ComplexMatrix& a) {
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c)
        out << name << ',' << r << ',' << c << ',' << text::format_double(a(r, c).real()) << ','
            << text::format_double(a(r, c).imag()) << '\n';
  };
  dump("h", m.h);
  if (m.s) dump("s", *m.s);
  return out.str();
}

inline SubspaceMatrices from_csv(std::string_view content) {
  SubspaceMatrices m;
  Eigen::Index dim = -1;
  bool header_seen = false;
  bool has_s = false;
  for (const auto& raw : text::split(content, '\n')) {
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = text::trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string key(body.substr(0, eq));
      const std::string value(body.substr(eq + 1));
      if (key == "method") m.method = method_from_string(value);
      else if (key == "provenance") m.provenance.sampled = value == "sampled";
      else if (key == "shots") m.provenance.shots_per_element = std::stoll(value);
      else if (key == "noise_model") m.provenance.noise_model = value;
      else if (key == "seed") m.provenance.seed = std::stoull(value);
      else if (key == "manifold_policy") m.manifold_policy = value;
      else if (key == "energy_offset") m.energy_offset = text::parse_double(value);
      else if (key == "dim") {
        dim = std::stol(value);
        m.h = ComplexMatrix::Zero(dim, dim);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "matrix,row,col,re,im") throw FormatError("matrix CSV: missing column header");
      header_seen = true;
      continue;
    }
    if (dim < 0) throw FormatError("matrix CSV: dim not declared before data");
    const auto f = text::split(line, ',');
    if (f.size() != 5) throw FormatError("matrix CSV: expected 5 fields");
    const long r = std::stol(f[1]);
    const long c = std::stol(f[2]);
    if (r < 0 || c < 0 || r >= dim || c >= dim) throw FormatError("matrix CSV: index out of range");
    const cplx v{text::parse_double(f[3]), text::parse_double(f[4])};
    if (f[0] == "h") {
      m.h(r, c) = v;
    } else if (f[0] == "s") {
      if (!has_s) {
        m.s = ComplexMatrix::Zero(dim, dim);
        has_s = true;
      }
      (*m.s)(r, c) = v;
    } else {
      throw FormatError("matrix CSV: unknown matrix '" + f[0] + "'");
    }
  }
  if (dim < 0) throw FormatError("matrix CSV: no dim");
  return m;
}

}  // namespace gevpnoise::subspace
