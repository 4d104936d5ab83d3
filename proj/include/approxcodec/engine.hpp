#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "approxcodec/system.hpp"

namespace approxcodec {

// The engine presumes f injective on D, as the validity clauses do
// (strict monotonicity along L and R); dedupe non-injective field tables
// before using them here.

/// A pair (L, R) of finite index sets below a bound d, consistent with being
/// the depth-d truncation of some parameter's best-approximation sets.
/// Disjointness of L and R follows from the value-separation clause and is
/// recorded as an invariant of the type.
struct FiniteApproximation {
  std::vector<Index> L;
  std::vector<Index> R;
  Index d = 0;

  bool operator==(const FiniteApproximation&) const = default;
};

using ApproximationChain = std::vector<FiniteApproximation>;

struct FormInterval {
  LinearForm lo;
  LinearForm hi;
};

namespace detail {

/// -1 / +1: f(e) lies below / above the parameter; a bracket straddling
/// f(e) cannot resolve and errors out.
inline int side_of_param(const ApproximationSystem& sys, Index e,
                         const ParamReal& c, const LinearForm& lo,
                         const LinearForm& hi, const Caps& caps) {
  if (c.is_exact()) {
    // 0 when f(e) == c exactly; such an index joins neither side
    return sys.compare_f_form(e, lo, caps);
  }
  if (sys.compare_f_form(e, lo, caps) < 0) return -1;
  if (sys.compare_f_form(e, hi, caps) > 0) return 1;
  throw PrecisionCapExceeded(
      "interval parameter cannot resolve a comparison against f(" +
      std::to_string(e) + ")");
}

}  // namespace detail

/// L(c) up to `depth`, in one pass: the indices achieving strict running
/// maxima among f-values below c.
inline std::vector<Index> best_left(const ApproximationSystem& sys,
                                    const ParamReal& c, Index depth,
                                    const Caps& caps = {},
                                    WorkMeter* meter = nullptr) {
  std::vector<Index> out;
  std::optional<Index> best;
  LinearForm lo = c.lo_form(), hi = c.hi_form();
  for (Index e = 1; e <= depth; ++e) {
    if (meter) meter->tick();
    if (detail::side_of_param(sys, e, c, lo, hi, caps) >= 0) continue;
    if (!best || sys.compare_ff(e, *best, caps) > 0) {
      out.push_back(e);
      best = e;
    }
  }
  return out;
}

/// R(c) up to `depth`: strict running minima among f-values above c.
inline std::vector<Index> best_right(const ApproximationSystem& sys,
                                     const ParamReal& c, Index depth,
                                     const Caps& caps = {},
                                     WorkMeter* meter = nullptr) {
  std::vector<Index> out;
  std::optional<Index> best;
  LinearForm lo = c.lo_form(), hi = c.hi_form();
  for (Index e = 1; e <= depth; ++e) {
    if (meter) meter->tick();
    if (detail::side_of_param(sys, e, c, lo, hi, caps) <= 0) continue;
    if (!best || sys.compare_ff(e, *best, caps) < 0) {
      out.push_back(e);
      best = e;
    }
  }
  return out;
}

namespace detail {

inline bool strictly_increasing_indices(const std::vector<Index>& v, Index d) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1 || v[i] > d) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

}  // namespace detail

/// Definition-2 validity of (L, R) up to d. Clause (3) is checked in one
/// pass: at every e <= d, the last L-element so far must reach f(e) from
/// above is false... concretely: f(e) <= max f(L cap D<=e) or
/// f(e) >= min f(R cap D<=e); monotonicity along L and R makes both sides
/// single lookups.
inline bool is_finite_approximation(const ApproximationSystem& sys,
                                    const FiniteApproximation& fa,
                                    const Caps& caps = {},
                                    WorkMeter* meter = nullptr) {
  const auto& L = fa.L;
  const auto& R = fa.R;
  if (!detail::strictly_increasing_indices(L, fa.d) ||
      !detail::strictly_increasing_indices(R, fa.d)) {
    return false;
  }
  // disjointness (implied by clause (1), checked directly on indices)
  {
    std::size_t i = 0, j = 0;
    while (i < L.size() && j < R.size()) {
      if (L[i] == R[j]) return false;
      L[i] < R[j] ? ++i : ++j;
    }
  }
  // (2) f strictly increasing along L, strictly decreasing along R
  for (std::size_t i = 1; i < L.size(); ++i) {
    if (sys.compare_ff(L[i - 1], L[i], caps) >= 0) return false;
  }
  for (std::size_t i = 1; i < R.size(); ++i) {
    if (sys.compare_ff(R[i - 1], R[i], caps) <= 0) return false;
  }
  // (1) max f(L) < min f(R); with (2) this is one comparison
  if (!L.empty() && !R.empty() &&
      sys.compare_ff(L.back(), R.back(), caps) >= 0) {
    return false;
  }
  // (3)
  std::size_t li = 0, ri = 0;
  std::optional<Index> lcur, rcur;
  for (Index e = 1; e <= fa.d; ++e) {
    if (meter) meter->tick();
    if (li < L.size() && L[li] == e) lcur = e, ++li;
    if (ri < R.size() && R[ri] == e) rcur = e, ++ri;
    bool ok = (lcur && sys.compare_ff(*lcur, e, caps) >= 0) ||
              (rcur && sys.compare_ff(*rcur, e, caps) <= 0);
    if (!ok) return false;
  }
  return true;
}

inline bool is_finite_approximation(const ApproximationSystem& sys,
                                    const std::vector<Index>& L,
                                    const std::vector<Index>& R, Index d,
                                    const Caps& caps = {}) {
  return is_finite_approximation(sys, FiniteApproximation{L, R, d}, caps);
}

/// The lemma's cross-check oracle: picks a rational strictly inside
/// (max f(L), min f(R)) and tests best_left/best_right recovery.
inline bool recoverability_check(const ApproximationSystem& sys,
                                 const FiniteApproximation& fa,
                                 const Caps& caps = {}) {
  if (fa.L.empty() || fa.R.empty()) {
    throw InvalidInput("recoverability_check requires nonempty L and R");
  }
  // maxima over possibly non-monotone inputs: no validity assumed here
  auto argmax = fa.L.front();
  for (Index e : fa.L) {
    if (sys.compare_ff(e, argmax, caps) > 0) argmax = e;
  }
  auto argmin = fa.R.front();
  for (Index e : fa.R) {
    if (sys.compare_ff(e, argmin, caps) < 0) argmin = e;
  }
  if (sys.compare_ff(argmax, argmin, caps) >= 0) {
    throw EmptyGap("max f(L) >= min f(R)");
  }
  Rational c = rational_between(sys.f(argmax), sys.f(argmin), caps);
  ParamReal pc(LinearForm::rational(sys.basis(), c));
  std::vector<Index> L2 = best_left(sys, pc, fa.d, caps);
  std::vector<Index> R2 = best_right(sys, pc, fa.d, caps);
  std::vector<Index> ls = fa.L, rs = fa.R;
  std::sort(ls.begin(), ls.end());
  std::sort(rs.begin(), rs.end());
  return L2 == ls && R2 == rs;
}

/// The unique extension of `fa` up to d2 that adds no left points: R gains
/// exactly the strict running minima inside (max f(L), current min f(R)).
inline FiniteApproximation right_extension(const ApproximationSystem& sys,
                                           const FiniteApproximation& fa,
                                           Index d2, const Caps& caps = {},
                                           WorkMeter* meter = nullptr,
                                           bool validate_input = true) {
  if (d2 < fa.d) throw InvalidInput("right_extension: d2 below the input bound");
  if (validate_input && !is_finite_approximation(sys, fa, caps)) {
    throw InvalidInput("right_extension: input is not a finite approximation");
  }
  FiniteApproximation out{fa.L, fa.R, d2};
  std::optional<Index> lmax;
  if (!fa.L.empty()) lmax = fa.L.back();
  std::optional<Index> rmin;
  if (!fa.R.empty()) rmin = fa.R.back();
  for (Index e = fa.d + 1; e <= d2; ++e) {
    if (meter) meter->tick();
    if (lmax && sys.compare_ff(e, *lmax, caps) <= 0) continue;
    if (rmin && sys.compare_ff(e, *rmin, caps) >= 0) continue;
    out.R.push_back(e);
    rmin = e;
  }
  return out;
}

namespace detail {

/// Sorted f-order of 1..d1 plus the incremental gap-filling state shared by
/// splits_between and find_split. Adjacent pairs suffice: a witness for a
/// wider pair is implied by one for some adjacent pair inside it.
struct SplitScan {
  std::vector<Index> order;    // 1..d1 sorted by f-value
  std::vector<bool> filled;    // gap i = (order[i], order[i+1])
  Index unfilled = 0;

  SplitScan(const ApproximationSystem& sys, Index d1, const Caps& caps) {
    order.resize(d1);
    for (Index i = 0; i < d1; ++i) order[i] = i + 1;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return sys.compare_ff(a, b, caps) < 0;
    });
    if (d1 >= 1) {
      filled.assign(d1 - 1, false);
      unfilled = d1 - 1;
    }
  }

  /// Feeds a candidate index e3 > d1; marks the gap strictly containing its
  /// f-value, if any.
  void feed(const ApproximationSystem& sys, Index e3, const Caps& caps) {
    if (unfilled == 0 || order.empty()) return;
    DoubleIv x = sys.f_iv(e3);
    std::size_t a = 0, b = order.size();
    while (a < b) {
      std::size_t mid = (a + b) / 2;
      DoubleIv fm = sys.f_iv(order[mid]);
      if (fm.hi < x.lo) {
        a = mid + 1;
      } else if (fm.lo > x.hi) {
        b = mid;
      } else {
        int s = sys.compare_ff(order[mid], e3, caps);
        if (s < 0) {
          a = mid + 1;
        } else {
          b = mid;
        }
      }
    }
    // a = first position with f(order[a]) > f(e3); gap a-1 contains the value
    if (a == 0 || a == order.size()) return;
    std::size_t gap = a - 1;
    if (!filled[gap]) {
      filled[gap] = true;
      --unfilled;
    }
  }
};

}  // namespace detail

/// Does every adjacent f-gap of D<=d1 receive a strictly interior f-value
/// from (d1, d2]?
inline bool splits_between(const ApproximationSystem& sys, Index d1, Index d2,
                           const Caps& caps = {}, WorkMeter* meter = nullptr) {
  if (d1 >= d2) throw InvalidInput("splits_between: need d1 < d2");
  detail::SplitScan scan(sys, d1, caps);
  for (Index e3 = d1 + 1; e3 <= d2 && scan.unfilled > 0; ++e3) {
    if (meter) meter->tick();
    scan.feed(sys, e3, caps);
  }
  return scan.unfilled == 0;
}

/// Smallest d2 > d1 with splits_between(d1, d2).
inline Index find_split(const ApproximationSystem& sys, Index d1,
                        const Caps& caps = {}, WorkMeter* meter = nullptr) {
  if (d1 < 1) throw InvalidInput("find_split: d1 must be >= 1");
  detail::SplitScan scan(sys, d1, caps);
  if (scan.unfilled == 0) return d1 + 1;  // vacuous split at the first candidate
  for (Index e3 = d1 + 1;; ++e3) {
    if (meter) meter->tick();
    if (e3 - d1 > caps.search_cap) {
      throw SearchCapExceeded("find_split exceeded the search cap");
    }
    if (e3 > sys.max_index()) {
      throw DepthExhausted("find_split ran off the system's finite domain");
    }
    scan.feed(sys, e3, caps);
    if (scan.unfilled == 0) return e3;
  }
}

/// Least element of L(c1) greater than e, within `depth`. Iterating this is
/// the successor function delta on the well-ordered set (L(c1), <), with
/// delta^0 the identity.
inline Index successor(const ApproximationSystem& sys, const ParamReal& c1,
                       Index e, Index depth, const Caps& caps = {}) {
  std::vector<Index> L = best_left(sys, c1, depth, caps);
  auto it = std::find(L.begin(), L.end(), e);
  if (it == L.end()) {
    throw InvalidInput("successor: e is not a best left approximation");
  }
  ++it;
  if (it == L.end()) {
    throw DepthExhausted("successor: no next element within depth");
  }
  return *it;
}

/// The suffix from the first entry with both sides nonempty; the base-case
/// entries that start from the empty pair fall outside the nested-chain
/// lemma's hypothesis.
inline ApproximationChain nonempty_suffix(const ApproximationChain& chain) {
  std::size_t k = 0;
  while (k < chain.size() && (chain[k].L.empty() || chain[k].R.empty())) ++k;
  return ApproximationChain(chain.begin() + k, chain.end());
}

/// [max f(L_last), min f(R_last)] of a validated chain; the nested-chain
/// lemma's bracket at the deepest entry.
inline FormInterval limit_interval(const ApproximationSystem& sys,
                                   const ApproximationChain& chain,
                                   const Caps& caps = {}) {
  if (chain.empty()) throw InvalidChain("empty chain");
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& fa = chain[i];
    if (fa.L.empty() || fa.R.empty()) {
      throw InvalidChain("chain entries need nonempty L and R");
    }
    if (i > 0 && chain[i - 1].d >= fa.d) {
      throw InvalidChain("chain bounds must be strictly increasing");
    }
    if (!is_finite_approximation(sys, fa, caps)) {
      throw InvalidChain("chain entry " + std::to_string(i) +
                         " is not a finite approximation");
    }
    if (i > 0) {
      if (!std::includes(fa.L.begin(), fa.L.end(), chain[i - 1].L.begin(),
                         chain[i - 1].L.end()) ||
          !std::includes(fa.R.begin(), fa.R.end(), chain[i - 1].R.begin(),
                         chain[i - 1].R.end())) {
        throw InvalidChain("chain entry " + std::to_string(i) +
                           " does not extend its predecessor");
      }
    }
  }
  const auto& last = chain.back();
  return {sys.f(last.L.back()), sys.f(last.R.back())};
}

}  // namespace approxcodec
