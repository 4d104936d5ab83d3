#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "approxcodec/caps.hpp"
#include "approxcodec/errors.hpp"
#include "approxcodec/linear_form.hpp"
#include "approxcodec/param_real.hpp"

namespace approxcodec {

using Index = std::uint64_t;

/// One instance of the approximation data (U, D, f, g): an open interval U,
/// a closed discrete domain D enumerated by indices 1, 2, ... in increasing
/// order of value, a map f into U with dense image, and the selector g used
/// by the decoder. Systems are immutable after construction; internal value
/// caches are synchronized.
class ApproximationSystem {
 public:
  virtual ~ApproximationSystem() = default;

  virtual std::string kind() const = 0;
  virtual BasisPtr basis() const = 0;
  virtual LinearForm u_lo() const = 0;
  virtual LinearForm u_hi() const = 0;

  /// Largest valid D-index (finite for table-backed systems).
  virtual Index max_index() const { return UINT64_MAX; }

  /// The real element of D at index n (strictly increasing in n).
  virtual LinearForm value_of(Index n) const {
    require_index(n);
    return LinearForm::rational(basis(), Rational(static_cast<unsigned long>(n)));
  }

  virtual LinearForm f(Index n) const = 0;

  /// Conservative double bounds on f(n); the exact comparisons fall back to
  /// forms only when these overlap.
  virtual DoubleIv f_iv(Index n) const { return f(n).double_iv(); }

  /// Every rational value in the image of f, across all depths. Parameters
  /// constructed as rationals must avoid these: a parameter equal to an
  /// f-value has no valid best-approximation trace.
  virtual const std::vector<Rational>& rational_f_values() const {
    static const std::vector<Rational> none;
    return none;
  }

  /// Exact sign of f(a) - f(b).
  int compare_ff(Index a, Index b, const Caps& caps = {}) const {
    DoubleIv x = f_iv(a), y = f_iv(b);
    if (x.hi < y.lo) return -1;
    if (x.lo > y.hi) return 1;
    return sign_of(f(a) - f(b), caps);
  }

  /// Exact sign of f(n) - x.
  int compare_f_form(Index n, const LinearForm& x, const Caps& caps = {}) const {
    DoubleIv a = f_iv(n), b = x.double_iv();
    if (a.hi < b.lo) return -1;
    if (a.lo > b.hi) return 1;
    return sign_of(f(n) - x, caps);
  }

  /// The candidate values v_e (e = 1..d) whose distance to c the selector g
  /// minimizes; requires a < b.
  virtual std::vector<LinearForm> g_candidates(const LinearForm& a,
                                               const LinearForm& b, Index d,
                                               const Caps& caps,
                                               WorkMeter& meter) const = 0;

  /// g(c, a, b, d): 1 when b <= a, otherwise the e <= d minimizing the
  /// distance from c to v_e; exact midpoint ties resolve to the smallest e.
  Index g(const ParamReal& c, const LinearForm& a, const LinearForm& b,
          Index d, const Caps& caps, WorkMeter& meter) const {
    if (sign_of(b - a, caps) <= 0) return 1;
    if (d < 1) throw InvalidInput("g: d must be >= 1");
    require_index(d);
    std::vector<LinearForm> v = g_candidates(a, b, d, caps, meter);
    if (c.is_exact()) {
      Index best = 1;
      LinearForm best_dist = abs_form(c.exact() - v[0], caps);
      for (Index e = 2; e <= d; ++e) {
        LinearForm dist = abs_form(c.exact() - v[e - 1], caps);
        if (sign_of(dist - best_dist, caps) < 0) {
          best = e;
          best_dist = std::move(dist);
        }
      }
      return best;
    }
    return interval_argmin(c, v, caps);
  }

  /// Theorem A condition (ii), constructively: a nonempty open rational
  /// subinterval of (a, b) on which g is constantly e. The interval sits
  /// strictly inside the ball around v_e of half the minimal gap to the
  /// other candidates.
  RationalInterval verify_condition_ii(const LinearForm& a, const LinearForm& b,
                                       Index d, Index e, const Caps& caps,
                                       WorkMeter& meter) const {
    auto [lo, hi] = witness_bounds(a, b, d, e, caps, meter);
    Rational rlo = rational_between(lo, hi, caps);
    Rational rhi = rational_between(LinearForm::rational(basis(), rlo), hi, caps);
    return {rlo, rhi};
  }

  /// Form-level witness bounds (b1, b2) with g == e on the open interval.
  std::pair<LinearForm, LinearForm> witness_bounds(const LinearForm& a,
                                                   const LinearForm& b, Index d,
                                                   Index e, const Caps& caps,
                                                   WorkMeter& meter) const {
    std::vector<LinearForm> v = g_candidates(a, b, d, caps, meter);
    return witness_bounds_from(v, a, b, d, e, caps);
  }

  /// Same, reusing candidates the caller already computed.
  std::pair<LinearForm, LinearForm> witness_bounds_from(
      const std::vector<LinearForm>& v, const LinearForm& a,
      const LinearForm& b, Index d, Index e, const Caps& caps) const {
    if (e < 1 || e > d) throw InvalidInput("witness: need 1 <= e <= d");
    if (sign_of(b - a, caps) <= 0) throw InvalidInput("witness: need a < b");
    const LinearForm& vt = v[e - 1];
    if (d == 1) return {a, b};
    bool have_r = false;
    LinearForm r;
    for (Index k = 1; k <= d; ++k) {
      if (k == e) continue;
      LinearForm dist = abs_form(vt - v[k - 1], caps);
      if (dist.is_zero()) {
        throw EmptyWitness(
            "two candidate values coincide; this falsifies the system's "
            "injectivity hypothesis at d=" + std::to_string(d));
      }
      if (!have_r || sign_of(dist - r, caps) < 0) {
        r = std::move(dist);
        have_r = true;
      }
    }
    LinearForm half = r.scaled(Rational(1, 2));
    LinearForm lo = vt - half, hi = vt + half;
    if (sign_of(lo - a, caps) < 0) lo = a;
    if (sign_of(b - hi, caps) < 0) hi = b;
    if (sign_of(hi - lo, caps) <= 0) {
      throw EmptyWitness("witness interval is empty");  // cannot happen: v_e in (a,b)
    }
    return {lo, hi};
  }

 protected:
  void require_index(Index n) const {
    if (n < 1) throw InvalidInput("D-indices start at 1");
    if (n > max_index()) {
      throw DepthExhausted("index " + std::to_string(n) +
                           " beyond the system's domain (max " +
                           std::to_string(max_index()) + ")");
    }
  }

  static LinearForm abs_form(LinearForm x, const Caps& caps) {
    return sign_of(x, caps) >= 0 ? x : -x;
  }

 private:
  /// Argmin with an interval-valued c: the winner's distance upper bound
  /// must lie strictly below every other lower bound, which holds exactly
  /// when the bracket avoids all relevant midpoints.
  Index interval_argmin(const ParamReal& c, const std::vector<LinearForm>& v,
                        const Caps& caps) const {
    LinearForm clo = c.lo_form(), chi = c.hi_form();
    std::vector<LinearForm> dlo, dhi;
    dlo.reserve(v.size());
    dhi.reserve(v.size());
    for (const auto& ve : v) {
      // distance bounds between [clo, chi] and the point ve
      LinearForm below = ve - chi;  // positive when ve above the bracket
      LinearForm above = clo - ve;  // positive when ve below the bracket
      int sb = sign_of(below, caps), sa = sign_of(above, caps);
      if (sb > 0) {
        dlo.push_back(below);
        dhi.push_back(ve - clo);
      } else if (sa > 0) {
        dlo.push_back(above);
        dhi.push_back(chi - ve);
      } else {
        dlo.push_back(LinearForm::zero(c.basis()));
        LinearForm m1 = chi - ve, m2 = ve - clo;
        dhi.push_back(sign_of(m1 - m2, caps) >= 0 ? m1 : m2);
      }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (sign_of(dhi[i] - dhi[best], caps) < 0) best = i;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i == best) continue;
      if (sign_of(dlo[i] - dhi[best], caps) <= 0) {
        throw PrecisionCapExceeded(
            "interval parameter too wide to resolve the argmin in g");
      }
    }
    return static_cast<Index>(best + 1);
  }
};

using SystemPtr = std::shared_ptr<const ApproximationSystem>;

namespace detail {

/// Shared batched evaluator for the h1/h2 family. For every e <= d it finds
/// the first n whose scan value lands in the open window
///   ( f(e), min(f(e) + u, next f-value of D<=d above f(e)) ),
/// which matches the per-index linear scan because the windows are pairwise
/// disjoint. Returns (n_e, h2_e = scan(n_e) - f(e)) for e = 1..d.
struct ScanSeq {
  virtual ~ScanSeq() = default;
  virtual DoubleIv approx(Index n) const = 0;
  virtual LinearForm exact(Index n) const = 0;
};

inline std::vector<std::pair<Index, LinearForm>> batched_first_entry(
    const ApproximationSystem& sys, const LinearForm& u, Index d,
    const ScanSeq& seq, const Caps& caps, WorkMeter& meter) {
  if (sign_of(u, caps) <= 0) throw InvalidInput("h-search: u must be positive");
  // f-sorted order of 1..d
  std::vector<Index> order(d);
  for (Index i = 0; i < d; ++i) order[i] = i + 1;
  std::sort(order.begin(), order.end(), [&](Index x, Index y) {
    return sys.compare_ff(x, y, caps) < 0;
  });
  std::vector<DoubleIv> fiv(d);
  for (Index i = 0; i < d; ++i) fiv[i] = sys.f_iv(order[i]);

  // window tops: min(f(e)+u, f(next))
  std::vector<LinearForm> top(d);
  std::vector<DoubleIv> topiv(d);
  for (Index i = 0; i < d; ++i) {
    LinearForm cap_u = sys.f(order[i]) + u;
    if (i + 1 < d) {
      LinearForm nxt = sys.f(order[i + 1]);
      top[i] = sign_of(cap_u - nxt, caps) <= 0 ? cap_u : nxt;
    } else {
      top[i] = cap_u;
    }
    topiv[i] = top[i].double_iv();
  }

  std::vector<std::pair<Index, LinearForm>> out(
      d, {0, LinearForm::zero(sys.basis())});
  Index remaining = d;
  for (Index n = 1; remaining > 0; ++n) {
    meter.tick();
    if (n > caps.search_cap) {
      throw SearchCapExceeded("h-search exceeded the search cap with " +
                              std::to_string(remaining) +
                              " windows still unfilled");
    }
    DoubleIv x = seq.approx(n);
    // first sorted position with f >= scan value; binary search on the safe
    // double bounds with exact repair when they overlap. Equality happens
    // when the scan sequence is f itself (sine) and n <= d; f >= x must then
    // hold so that n's own grid point caps the window below it.
    std::size_t i;
    {
      std::size_t a = 0, b = d;
      while (a < b) {
        std::size_t mid = (a + b) / 2;
        if (fiv[mid].hi < x.lo) {
          a = mid + 1;
        } else if (fiv[mid].lo > x.hi) {
          b = mid;
        } else {
          int s = sign_of(seq.exact(n) - sys.f(order[mid]), caps);
          if (s > 0) {
            a = mid + 1;
          } else {
            b = mid;
          }
        }
      }
      i = a;
    }
    if (i == 0) continue;  // below every window
    std::size_t j = i - 1;
    if (out[order[j] - 1].first != 0) continue;  // window already filled
    // window check: x < top[j], strictly
    bool inside;
    if (x.hi < topiv[j].lo) {
      inside = true;
    } else if (x.lo > topiv[j].hi) {
      inside = false;
    } else {
      inside = sign_of(seq.exact(n) - top[j], caps) < 0;
    }
    if (!inside) continue;
    out[order[j] - 1] = {n, seq.exact(n) - sys.f(order[j])};
    --remaining;
  }
  return out;
}

}  // namespace detail

}  // namespace approxcodec
