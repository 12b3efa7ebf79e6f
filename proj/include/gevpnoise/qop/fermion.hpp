#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "gevpnoise/core/constants.hpp"
#include "gevpnoise/core/linalg.hpp"

namespace gevpnoise::qop {

struct Ladder {
  int mode = 0;
  bool create = false;

  auto operator<=>(const Ladder&) const = default;
};

inline Ladder cre(int mode) { return {mode, true}; }
inline Ladder ann(int mode) { return {mode, false}; }

using LadderString = std::vector<Ladder>;

/// Linear combination of products of fermionic ladder operators. Products are
/// applied right to left as written, e.g. {cre(1), ann(0)} is a†_1 a_0.
class FermionOperator {
 public:
  using Term = std::pair<LadderString, cplx>;

  FermionOperator() = default;
  explicit FermionOperator(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static FermionOperator identity(cplx c = 1.0) { return FermionOperator({{LadderString{}, c}}); }
  static FermionOperator product(LadderString ops, cplx c = 1.0) { return FermionOperator({{std::move(ops), c}}); }

  const std::vector<Term>& terms() const noexcept { return terms_; }

  void add(LadderString ops, cplx c) { terms_.emplace_back(std::move(ops), c); }

  int max_mode() const {
    int m = -1;
    for (const auto& [ops, c] : terms_)
      for (const auto& l : ops) m = std::max(m, l.mode);
    return m;
  }

  FermionOperator operator+(const FermionOperator& o) const {
    auto t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return FermionOperator(std::move(t));
  }
  FermionOperator operator*(cplx s) const {
    auto t = terms_;
    for (auto& term : t) term.second *= s;
    return FermionOperator(std::move(t));
  }
  FermionOperator operator*(const FermionOperator& o) const {
    std::vector<Term> t;
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) {
        LadderString ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        t.emplace_back(std::move(ab), ca * cb);
      }
    return FermionOperator(std::move(t));
  }

  FermionOperator adjoint() const {
    std::vector<Term> t;
    for (const auto& [ops, c] : terms_) {
      LadderString rev(ops.rbegin(), ops.rend());
      for (auto& l : rev) l.create = !l.create;
      t.emplace_back(std::move(rev), std::conj(c));
    }
    return FermionOperator(std::move(t));
  }

  /// Normal-ordered canonical form: creators left of annihilators, each group
  /// sorted by descending mode; like terms merged, zeros dropped.
  FermionOperator normal_ordered() const {
    std::map<LadderString, cplx> acc;
    std::vector<Term> work = terms_;
    while (!work.empty()) {
      auto [ops, c] = std::move(work.back());
      work.pop_back();
      bool zero = false;
      bool swapped = true;
      // Bubble sort with anticommutation; a_p a†_q = δ_pq - a†_q a_p spawns a contraction term.
      while (swapped && !zero) {
        swapped = false;
        for (std::size_t k = 0; k + 1 < ops.size(); ++k) {
          Ladder& left = ops[k];
          Ladder& right = ops[k + 1];
          if (!left.create && right.create) {
            if (left.mode == right.mode) {
              LadderString contracted;
              contracted.insert(contracted.end(), ops.begin(), ops.begin() + static_cast<long>(k));
              contracted.insert(contracted.end(), ops.begin() + static_cast<long>(k) + 2, ops.end());
              work.emplace_back(std::move(contracted), c);
            }
            std::swap(left, right);
            c = -c;
            swapped = true;
          } else if (left.create == right.create) {
            if (left.mode == right.mode) {
              zero = true;
              break;
            }
            if (left.mode < right.mode) {
              std::swap(left, right);
              c = -c;
              swapped = true;
            }
          }
        }
      }
      if (!zero) acc[ops] += c;
    }
    std::vector<Term> out;
    for (auto& [ops, c] : acc)
      if (std::abs(c) >= tol::kPrune) out.emplace_back(ops, c);
    return FermionOperator(std::move(out));
  }

  bool is_normal_ordered() const {
    const auto canon = normal_ordered();
    return canon.terms_ == terms_;
  }

  /// Equality of canonical forms, coefficients compared to `tol`.
  bool equivalent(const FermionOperator& o, double tol = 1e-12) const {
    const auto a = normal_ordered().terms_;
    const auto b = o.normal_ordered().terms_;
    std::map<LadderString, cplx> diff;
    for (const auto& [ops, c] : a) diff[ops] += c;
    for (const auto& [ops, c] : b) diff[ops] -= c;
    return std::all_of(diff.begin(), diff.end(), [&](const auto& kv) { return std::abs(kv.second) <= tol; });
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace gevpnoise::qop
