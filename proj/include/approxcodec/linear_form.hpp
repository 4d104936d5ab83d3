#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "approxcodec/basis.hpp"
#include "approxcodec/caps.hpp"
#include "approxcodec/errors.hpp"
#include "approxcodec/interval.hpp"
#include "approxcodec/rational.hpp"

namespace approxcodec {

/// Exact element of the rational span of an irrational basis. The universal
/// scalar of the engine: every quantity in scope is a rational combination
/// of basis symbols, so equality is a coefficient-vector comparison (sound
/// by linear independence) and arithmetic is exact and closed.
///
/// Terms are kept sorted by symbol key with no zero coefficients, and a
/// conservative double enclosure is computed eagerly so values stay
/// immutable and freely shareable across threads.
class LinearForm {
 public:
  using Term = std::pair<SymbolKey, Rational>;

  LinearForm() = default;

  static LinearForm zero(BasisPtr basis) { return LinearForm(std::move(basis), {}); }

  static LinearForm rational(BasisPtr basis, Rational q) {
    std::vector<Term> t;
    if (q != 0) t.emplace_back(SymbolKey{}, std::move(q));
    return LinearForm(std::move(basis), std::move(t));
  }

  static LinearForm symbol(BasisPtr basis, SymbolKey key, Rational coeff = 1) {
    if (!basis->allows(key)) {
      throw BasisMismatch("symbol not in basis: " + basis->key_name(key));
    }
    std::vector<Term> t;
    if (coeff != 0) t.emplace_back(key, std::move(coeff));
    return LinearForm(std::move(basis), std::move(t));
  }

  static LinearForm from_terms(BasisPtr basis, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    for (auto& t : terms) {
      if (!basis->allows(t.first)) {
        throw BasisMismatch("symbol not in basis: " + basis->key_name(t.first));
      }
      if (!out.empty() && out.back().first == t.first) {
        out.back().second += t.second;
        if (out.back().second == 0) out.pop_back();
      } else if (t.second != 0) {
        out.push_back(std::move(t));
      }
    }
    return LinearForm(std::move(basis), std::move(out));
  }

  const BasisPtr& basis() const { return basis_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// True when the value lies in the rational unit line.
  bool is_rational() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_[0].first.kind == SymKind::Unit);
  }
  Rational rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw InvalidInput("form is not rational");
    return terms_[0].second;
  }

  Rational coeff(const SymbolKey& k) const {
    for (const auto& t : terms_)
      if (t.first == k) return t.second;
    return Rational(0);
  }

  DoubleIv double_iv() const { return div_; }

  LinearForm operator+(const LinearForm& o) const {
    check_same_basis(o);
    return merged(o, false);
  }
  LinearForm operator-(const LinearForm& o) const {
    check_same_basis(o);
    return merged(o, true);
  }
  LinearForm operator-() const {
    std::vector<Term> t = terms_;
    for (auto& x : t) x.second = -x.second;
    return LinearForm(basis_, std::move(t));
  }
  LinearForm scaled(const Rational& k) const {
    if (k == 0) return LinearForm(basis_, {});
    std::vector<Term> t = terms_;
    for (auto& x : t) x.second *= k;
    return LinearForm(basis_, std::move(t));
  }

  bool operator==(const LinearForm& o) const {
    return basis_ == o.basis_ && terms_ == o.terms_;
  }

 private:
  LinearForm(BasisPtr basis, std::vector<Term> terms)
      : basis_(std::move(basis)), terms_(std::move(terms)) {
    recompute_double();
  }

  void check_same_basis(const LinearForm& o) const {
    if (basis_ != o.basis_) {
      throw BasisMismatch("operands live over different bases");
    }
  }

  LinearForm merged(const LinearForm& o, bool sub) const {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() ||
          (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
        out.push_back(terms_[i++]);
      } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
        out.push_back(o.terms_[j]);
        if (sub) out.back().second = -out.back().second;
        ++j;
      } else {
        Rational c = sub ? Rational(terms_[i].second - o.terms_[j].second)
                         : Rational(terms_[i].second + o.terms_[j].second);
        if (c != 0) out.emplace_back(terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return LinearForm(basis_, std::move(out));
  }

  void recompute_double() {
    double lo = 0.0, hi = 0.0;
    for (const auto& [key, c] : terms_) {
      DoubleIv cd = to_double_iv(c);
      DoubleIv sd = basis_ ? basis_->symbol_double(key) : DoubleIv{1.0, 1.0};
      // interval product for c * sym; both factors can straddle signs only
      // via the coefficient (symbols are positive except sines)
      double cands[4] = {cd.lo * sd.lo, cd.lo * sd.hi, cd.hi * sd.lo,
                         cd.hi * sd.hi};
      double plo = *std::min_element(cands, cands + 4);
      double phi = *std::max_element(cands, cands + 4);
      lo += plo;
      hi += phi;
    }
    // one outward ulp per accumulation step covers the rounding of +=
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
      hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    }
    div_ = {lo, hi};
  }

  BasisPtr basis_;
  std::vector<Term> terms_;
  DoubleIv div_{0.0, 0.0};
};

/// Rational enclosure of the form's value with width <= 2^-p; enclosures for
/// increasing p are nested (symbol caches only ever tighten).
inline RationalInterval refine(const LinearForm& f, std::uint64_t p,
                               const Caps& caps = {}) {
  if (f.is_zero()) return {Rational(0), Rational(0)};
  const Rational target = pow2(-static_cast<long>(p));
  std::uint64_t sp = p + 4;
  for (;;) {
    Rational lo(0), hi(0);
    for (const auto& [key, c] : f.terms()) {
      if (key.kind == SymKind::Unit) {
        lo += c;
        hi += c;
        continue;
      }
      RationalInterval iv = f.basis()->refine_symbol(key, sp, caps.precision_cap_bits);
      if (c >= 0) {
        lo += c * iv.lo;
        hi += c * iv.hi;
      } else {
        lo += c * iv.hi;
        hi += c * iv.lo;
      }
    }
    if (hi - lo <= target) return {lo, hi};
    if (sp > caps.precision_cap_bits) {
      throw PrecisionCapExceeded("refine: form needs more than " +
                                 std::to_string(caps.precision_cap_bits) +
                                 " bits");
    }
    sp *= 2;
  }
}

/// Sign of the exact value. Zero iff the coefficient vector is zero (the
/// zero test, sound under linear independence of the basis); otherwise the
/// enclosure is refined until it excludes zero. Termination is guaranteed
/// for genuinely independent bases; the precision cap converts a falsely
/// asserted independence into a diagnosable error instead of divergence.
inline int sign_of(const LinearForm& f, const Caps& caps = {}) {
  if (f.is_zero()) return 0;
  DoubleIv d = f.double_iv();
  if (d.lo > 0.0) return 1;
  if (d.hi < 0.0) return -1;
  for (std::uint64_t p = 16;; p *= 2) {
    if (p > caps.precision_cap_bits) {
      throw PrecisionCapExceeded(
          "sign: enclosure still straddles zero at the precision cap; "
          "a falsely asserted independence would cause exactly this");
    }
    RationalInterval iv = refine(f, p, caps);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
  }
}

inline std::strong_ordering compare(const LinearForm& a, const LinearForm& b,
                                    const Caps& caps = {}) {
  int s = sign_of(a - b, caps);
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

inline bool lt(const LinearForm& a, const LinearForm& b, const Caps& caps = {}) {
  return sign_of(a - b, caps) < 0;
}
inline bool le(const LinearForm& a, const LinearForm& b, const Caps& caps = {}) {
  return sign_of(a - b, caps) <= 0;
}

/// Largest k >= 0 with k*step < a (k = 0 when step >= a), plus the multiple
/// itself. Binary search over k driven by sign tests on a - k*step.
inline std::pair<std::uint64_t, LinearForm> floor_multiple(
    const LinearForm& a, const LinearForm& step, const Caps& caps = {}) {
  if (sign_of(step, caps) <= 0) throw InvalidInput("floor_multiple: step must be positive");
  if (sign_of(a - step, caps) <= 0) {
    return {0, LinearForm::zero(a.basis())};
  }
  // grow an exclusive upper bound, then bisect for the largest k with
  // k*step < a
  std::uint64_t lo = 1, hi = 2;
  while (sign_of(a - step.scaled(Rational(static_cast<unsigned long>(hi))), caps) > 0) {
    lo = hi;
    if (hi > (UINT64_MAX >> 1)) throw SearchCapExceeded("floor_multiple overflow");
    hi *= 2;
  }
  // invariant: lo*step < a <= hi*step
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (sign_of(a - step.scaled(Rational(static_cast<unsigned long>(mid))), caps) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, step.scaled(Rational(static_cast<unsigned long>(lo)))};
}

/// Exact rational strictly between two forms with a < b; the result is the
/// simplest rational in a refined separating gap, which keeps encoder
/// parameters small.
inline Rational rational_between(const LinearForm& a, const LinearForm& b,
                                 const Caps& caps = {}) {
  if (sign_of(b - a, caps) <= 0) throw InvalidInput("rational_between: need a < b");
  for (std::uint64_t p = 8;; p *= 2) {
    if (p > caps.precision_cap_bits) {
      throw PrecisionCapExceeded("rational_between: cannot separate operands");
    }
    RationalInterval ia = refine(a, p, caps);
    RationalInterval ib = refine(b, p, caps);
    if (ia.hi < ib.lo) return simplest_in_open(ia.hi, ib.lo);
  }
}

}  // namespace approxcodec
