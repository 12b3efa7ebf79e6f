#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/error.hpp"
#include "gevpnoise/core/linalg.hpp"
#include "gevpnoise/core/text.hpp"

namespace gevpnoise::qop {

inline constexpr int kMaxQubits = 64;

/// n-qubit Pauli word in symplectic form: qubit q carries X if bit q of `x` is
/// set, Z if bit q of `z` is set, Y if both. The represented operator is
/// i^{|x&z|} X^x Z^z, so every string is Hermitian and squares to identity.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  auto operator<=>(const PauliString&) const = default;

  bool is_identity() const noexcept { return (x | z) == 0; }
  int weight() const noexcept { return std::popcount(x | z); }

  // Number of Y factors.
  int y_count() const noexcept { return std::popcount(x & z); }

  char at(int qubit) const noexcept {
    const bool bx = (x >> qubit) & 1U;
    const bool bz = (z >> qubit) & 1U;
    return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }

  /// Character k of the word is qubit k.
  std::string word(int n_qubits) const {
    std::string out(static_cast<std::size_t>(n_qubits), 'I');
    for (int q = 0; q < n_qubits; ++q) out[static_cast<std::size_t>(q)] = at(q);
    return out;
  }

  static PauliString from_word(std::string_view word) {
    if (word.size() > kMaxQubits) throw DomainError("Pauli word longer than 64 qubits");
    PauliString p;
    for (std::size_t q = 0; q < word.size(); ++q) {
      const std::uint64_t bit = std::uint64_t{1} << q;
      switch (word[q]) {
        case 'I': break;
        case 'X': p.x |= bit; break;
        case 'Y': p.x |= bit; p.z |= bit; break;
        case 'Z': p.z |= bit; break;
        default: throw FormatError("bad Pauli character '" + std::string(1, word[q]) + "'");
      }
    }
    return p;
  }

  static PauliString single(int qubit, char kind) {
    std::string w(static_cast<std::size_t>(qubit + 1), 'I');
    w[static_cast<std::size_t>(qubit)] = kind;
    return from_word(w);
  }
};

// i^k for k mod 4.
inline cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

/// a*b = phase * result.
inline std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
  const PauliString c{a.x ^ b.x, a.z ^ b.z};
  const int k = a.y_count() + b.y_count() - c.y_count() + 2 * std::popcount(a.z & b.x);
  return {i_pow(k), c};
}

/// Weighted sum of Pauli strings. Terms are kept sorted by string, unique,
/// and free of coefficients below the prune threshold.
class PauliOperator {
 public:
  using Term = std::pair<PauliString, cplx>;

  PauliOperator() = default;
  explicit PauliOperator(int n_qubits) : n_qubits_(check_qubits(n_qubits)) {}
  PauliOperator(int n_qubits, std::vector<Term> terms) : n_qubits_(check_qubits(n_qubits)) {
    terms_ = canonicalize(std::move(terms));
    const std::uint64_t mask = n_qubits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits_) - 1;
    for (const auto& [p, c] : terms_)
      if (((p.x | p.z) & ~mask) != 0) throw DomainError("Pauli string acts outside the register");
  }

  static PauliOperator identity(int n_qubits, cplx coefficient = 1.0) {
    return PauliOperator(n_qubits, {{PauliString{}, coefficient}});
  }
  static PauliOperator term(int n_qubits, std::string_view word, cplx coefficient = 1.0) {
    if (static_cast<int>(word.size()) != n_qubits) throw SizeMismatch("Pauli word length differs from qubit count");
    return PauliOperator(n_qubits, {{PauliString::from_word(word), coefficient}});
  }

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  cplx coefficient(const PauliString& p) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                               [](const Term& t, const PauliString& key) { return t.first < key; });
    return (it != terms_.end() && it->first == p) ? it->second : cplx{0, 0};
  }

  PauliOperator adjoint() const {
    auto t = terms_;
    for (auto& [p, c] : t) c = std::conj(c);
    return PauliOperator(n_qubits_, std::move(t));
  }

  bool is_hermitian(double tol = tol::kHermitian) const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return std::abs(t.second.imag()) <= tol; });
  }
  bool is_anti_hermitian(double tol = tol::kHermitian) const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return std::abs(t.second.real()) <= tol; });
  }

  double one_norm() const {
    double s = 0;
    for (const auto& t : terms_) s += std::abs(t.second);
    return s;
  }

  PauliOperator operator+(const PauliOperator& other) const {
    check_same(other);
    auto t = terms_;
    t.insert(t.end(), other.terms_.begin(), other.terms_.end());
    return PauliOperator(n_qubits_, std::move(t));
  }
  PauliOperator operator-(const PauliOperator& other) const { return *this + other * cplx{-1.0, 0.0}; }
  PauliOperator operator*(cplx s) const {
    auto t = terms_;
    for (auto& term : t) term.second *= s;
    return PauliOperator(n_qubits_, std::move(t));
  }
  friend PauliOperator operator*(cplx s, const PauliOperator& op) { return op * s; }

  /// Dense 2^n x 2^n matrix; basis index bit q is qubit q.
  ComplexMatrix dense() const {
    if (n_qubits_ > 12) throw DomainError("dense(): more than 12 qubits");
    const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& [p, c] : terms_) {
      const cplx base = c * i_pow(p.y_count());
      for (std::uint64_t b = 0; b < dim; ++b) {
        const double sign = (std::popcount(b & p.z) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) += sign * base;
      }
    }
    return m;
  }

  /// One term per line: `(re,im)  WORD`; the header line records the qubit count.
  std::string to_text() const {
    std::string out = "# n_qubits " + std::to_string(n_qubits_) + "; word character k is qubit k\n";
    for (const auto& [p, c] : terms_)
      out += "(" + text::format_double(c.real()) + "," + text::format_double(c.imag()) + ")  " + p.word(n_qubits_) + "\n";
    return out;
  }

  static PauliOperator parse(std::string_view content) {
    int n = -1;
    std::vector<Term> terms;
    for (const auto& raw : text::split(content, '\n')) {
      const auto line = text::trim(raw);
      if (line.empty()) continue;
      if (line.front() == '#') {
        const auto f = text::split_whitespace(text::split(line.substr(1), ';')[0]);
        if (f.size() == 2 && f[0] == "n_qubits") n = std::stoi(f[1]);
        continue;
      }
      const auto f = text::split_whitespace(line);
      if (f.size() != 2 || f[0].size() < 5 || f[0].front() != '(' || f[0].back() != ')')
        throw FormatError("Pauli dump: bad line '" + std::string(line) + "'");
      const auto parts = text::split(std::string_view(f[0]).substr(1, f[0].size() - 2), ',');
      if (parts.size() != 2) throw FormatError("Pauli dump: bad coefficient");
      if (n < 0) n = static_cast<int>(f[1].size());
      if (static_cast<int>(f[1].size()) != n) throw FormatError("Pauli dump: word length mismatch");
      terms.emplace_back(PauliString::from_word(f[1]), cplx{text::parse_double(parts[0]), text::parse_double(parts[1])});
    }
    if (n < 0) throw FormatError("Pauli dump: qubit count unknown");
    return PauliOperator(n, std::move(terms));
  }

  bool operator==(const PauliOperator&) const = default;

  void check_same(const PauliOperator& other) const {
    if (other.n_qubits_ != n_qubits_) throw SizeMismatch("Pauli operators act on different qubit counts");
  }

 private:
  static int check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) throw DomainError("qubit count must be in [1, 64]");
    return n;
  }

  static std::vector<Term> canonicalize(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second += t.second;
      else
        out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return std::abs(t.second) < tol::kPrune; });
    return out;
  }

  int n_qubits_ = 1;
  std::vector<Term> terms_;
};

/// Exact product in the Pauli algebra with phase bookkeeping.
inline PauliOperator pauli_product(const PauliOperator& a, const PauliOperator& b) {
  a.check_same(b);
  std::vector<PauliOperator::Term> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& [pa, ca] : a.terms())
    for (const auto& [pb, cb] : b.terms()) {
      const auto [phase, pc] = multiply(pa, pb);
      terms.emplace_back(pc, phase * ca * cb);
    }
  return PauliOperator(a.n_qubits(), std::move(terms));
}

inline PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) { return pauli_product(a, b); }

/// Triple product a*b*c without materializing pruned intermediates.
inline PauliOperator pauli_product(const PauliOperator& a, const PauliOperator& b, const PauliOperator& c) {
  a.check_same(b);
  b.check_same(c);
  std::vector<PauliOperator::Term> terms;
  terms.reserve(a.size() * b.size() * c.size());
  for (const auto& [pa, ca] : a.terms())
    for (const auto& [pb, cb] : b.terms()) {
      const auto [ph1, pab] = multiply(pa, pb);
      const cplx cab = ph1 * ca * cb;
      for (const auto& [pc, cc] : c.terms()) {
        const auto [ph2, pabc] = multiply(pab, pc);
        terms.emplace_back(pabc, ph2 * cab * cc);
      }
    }
  return PauliOperator(a.n_qubits(), std::move(terms));
}

}  // namespace gevpnoise::qop
