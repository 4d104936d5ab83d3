#pragma once

#include <array>
#include <optional>
#include <set>
#include <vector>

#include "approxcodec/descriptor.hpp"
#include "approxcodec/engine.hpp"

namespace approxcodec {

/// A finite relation A (subset of D^m) given as an ordered enumeration of
/// distinct m-tuples of D-indices.
struct TupleSet {
  Index m = 1;
  std::vector<std::vector<Index>> tuples;

  void validate() const {
    if (m < 1) throw InvalidInput("tuple arity must be >= 1");
    std::set<std::vector<Index>> seen;
    for (const auto& t : tuples) {
      if (t.size() != m) throw InvalidInput("tuple arity mismatch");
      for (Index x : t) {
        if (x < 1) throw InvalidInput("tuple entries must be >= 1");
      }
      if (!seen.insert(t).second) {
        throw DuplicateTuple("duplicate tuple in input");
      }
    }
  }

  bool operator==(const TupleSet&) const = default;
};

/// The serialized parameter c = (c1, c2, c3): three approximation chains,
/// one entry per construction step, plus rational brackets strictly inside
/// each chain's final value bracket. Decoding is constant on the brackets.
struct EncodedParameter {
  SystemDescriptor system;
  Index m = 1;
  Index n_tuples = 0;
  Index final_depth = 0;
  std::array<ApproximationChain, 3> chains;
  std::array<RationalInterval, 3> brackets;
};

/// (b1, b2) with g(x, max f(L3), min f(R3), d_prev) == target on the open
/// interval; the encoder's condition-(ii) witness at one induction step.
inline std::pair<LinearForm, LinearForm> condition_iv_witness(
    const ApproximationSystem& sys, const FiniteApproximation& chain3_prev,
    Index d_prev, Index target, const Caps& caps = {},
    WorkMeter* meter = nullptr) {
  if (chain3_prev.L.empty() || chain3_prev.R.empty()) {
    throw InvalidInput("witness needs nonempty chain-3 sides");
  }
  if (target > d_prev) throw InvalidInput("witness: target beyond d_prev");
  WorkMeter local;
  WorkMeter& mm = meter ? *meter : local;
  LinearForm a = sys.f(chain3_prev.L.back());
  LinearForm b = sys.f(chain3_prev.R.back());
  return sys.witness_bounds(a, b, d_prev, target, caps, mm);
}

namespace detail {

/// Exact rational near the middle of the open form interval (lo, hi):
/// average of enclosures refined until it provably separates.
inline Rational rational_mid(const LinearForm& lo, const LinearForm& hi,
                             const Caps& caps) {
  for (std::uint64_t p = 8;; p *= 2) {
    if (p > caps.precision_cap_bits) {
      throw PrecisionCapExceeded("cannot place a rational midpoint");
    }
    RationalInterval il = refine(lo, p, caps);
    RationalInterval ih = refine(hi, p, caps);
    if (il.hi >= ih.lo) continue;
    Rational mid = (il.hi + ih.lo) / 2;
    LinearForm mf = LinearForm::rational(lo.basis(), mid);
    if (sign_of(mf - lo, caps) > 0 && sign_of(hi - mf, caps) > 0) return mid;
  }
}

/// A rational strictly inside (lo, hi) that coincides with no f-value of the
/// system; such a coincidence would void the parameter's best-approximation
/// trace. The collision set is finite, so one retry below its minimum member
/// always succeeds.
inline Rational pick_param_rational(const ApproximationSystem& sys,
                                    const LinearForm& lo, const LinearForm& hi,
                                    const Caps& caps, bool prefer_mid = false) {
  Rational r = prefer_mid ? rational_mid(lo, hi, caps)
                          : rational_between(lo, hi, caps);
  const auto& taboo = sys.rational_f_values();
  auto collides = [&](const Rational& x) {
    for (const auto& t : taboo) {
      if (t == x) return true;
    }
    return false;
  };
  if (!collides(r)) return r;
  // retry strictly below the smallest colliding value inside the window
  LinearForm new_hi = LinearForm::rational(lo.basis(), r);
  for (const auto& t : taboo) {
    LinearForm tf = LinearForm::rational(lo.basis(), t);
    if (sign_of(tf - lo, caps) > 0 && sign_of(new_hi - tf, caps) > 0) {
      new_hi = tf;
    }
  }
  Rational r2 = rational_between(lo, new_hi, caps);
  if (collides(r2)) {
    throw InternalInvariant("parameter rational still collides after retry");
  }
  return r2;
}

struct EncodeState {
  std::vector<Index> ds;
  std::array<ApproximationChain, 3> chains;
};

inline void assert_invariant(bool ok, const std::string& what) {
  if (!ok) throw InternalInvariant("encoder invariant violated: " + what);
}

}  // namespace detail

/// Runs the Proposition's inductive construction for m*N steps and returns
/// the assembled parameter. Every step's chain entries are revalidated and
/// the step properties (I)..(IV) are assert-checked; a violation is a hard
/// failure.
inline EncodedParameter encode(const ApproximationSystem& sys,
                               const SystemDescriptor& desc, const TupleSet& A,
                               const Caps& caps = {}) {
  A.validate();
  caps.validate();
  if (A.tuples.empty()) throw InvalidInput("encode: empty tuple set");
  if (auto fs = dynamic_cast<const FieldSystem*>(&sys); fs && !fs->injective()) {
    throw InvalidInput("encode: field f-table is not injective; apply dedupe_domain");
  }
  const Index m = A.m;
  const Index N = A.tuples.size();
  WorkMeter meter(caps.work_budget);

  detail::EncodeState st;
  auto& [ds, chains] = st;

  // ---- step 0 ----
  Index d_base = *std::max_element(A.tuples[0].begin(), A.tuples[0].end());
  // smallest d0 > d_base with f(d0) below every f(e), e <= d_base
  Index minpos = 1;
  for (Index e = 2; e <= d_base; ++e) {
    meter.tick();
    if (sys.compare_ff(e, minpos, caps) < 0) minpos = e;
  }
  Index d0 = 0;
  for (Index e = d_base + 1;; ++e) {
    meter.tick();
    if (e - d_base > caps.search_cap) {
      throw SearchCapExceeded("step 0: no new minimum under the cap");
    }
    if (sys.compare_ff(e, minpos, caps) < 0) {
      d0 = e;
      break;
    }
  }
  ds.push_back(d0);

  // a strictly between f(d0) and the least larger f-value among D<=d0
  Rational a0 = rational_between(sys.f(d0), sys.f(minpos), caps);
  ParamReal pa(LinearForm::rational(sys.basis(), a0));
  {
    FiniteApproximation c1{best_left(sys, pa, d0, caps, &meter),
                           best_right(sys, pa, d0, caps, &meter), d0};
    detail::assert_invariant(c1.L == std::vector<Index>{d0}, "(I)_0");
    detail::assert_invariant(is_finite_approximation(sys, c1, caps), "chain1 step 0");
    chains[0].push_back(std::move(c1));
  }
  chains[1].push_back(right_extension(sys, FiniteApproximation{{}, {}, 0}, d0,
                                      caps, &meter, false));
  detail::assert_invariant(is_finite_approximation(sys, chains[1][0], caps),
                           "chain2 step 0");
  {
    // canonical nonempty step-0 pair for chain 3: the best-approximation
    // trace of a rational placed in the gap just above the smallest f-value
    // (a gap between adjacent values contains no f-value to collide with)
    Index vmin = 1;
    for (Index e = 2; e <= d0; ++e) {
      meter.tick();
      if (sys.compare_ff(e, vmin, caps) < 0) vmin = e;
    }
    Index vsecond = 0;
    for (Index e = 1; e <= d0; ++e) {
      meter.tick();
      if (e == vmin) continue;
      if (vsecond == 0 || sys.compare_ff(e, vsecond, caps) < 0) vsecond = e;
    }
    Rational b0 = rational_between(sys.f(vmin), sys.f(vsecond), caps);
    ParamReal pb(LinearForm::rational(sys.basis(), b0));
    FiniteApproximation c3{best_left(sys, pb, d0, caps, &meter),
                           best_right(sys, pb, d0, caps, &meter), d0};
    detail::assert_invariant(!c3.L.empty() && !c3.R.empty(), "chain3 step 0 nonempty");
    detail::assert_invariant(is_finite_approximation(sys, c3, caps), "chain3 step 0");
    chains[2].push_back(std::move(c3));
  }

  // ---- steps 1 .. m*N ----
  for (Index n = 1; n <= m * N; ++n) {
    const Index s = (n - 1) / m;
    const Index t = (n - 1) % m + 1;
    const Index target = A.tuples[s][t - 1];
    const Index d_prev = ds.back();
    detail::assert_invariant(target <= d_prev, "(II) target within d_prev");

    // (A) split bound, (B) index bound, and for t == 1 a chain-2 insertion
    // witness (density supplies one; splitting alone does not when L2 is
    // still empty)
    Index d_step = find_split(sys, d_prev, caps, &meter);
    Index max_idx = 0;
    for (Index i = 0; i <= std::min<Index>(n, N - 1); ++i) {
      for (Index x : A.tuples[i]) max_idx = std::max(max_idx, x);
    }
    d_step = std::max(d_step, max_idx + 1);
    const auto& c2prev = chains[1][n - 1];
    if (t == 1) {
      std::optional<Index> lmax;
      if (!c2prev.L.empty()) lmax = c2prev.L.back();
      Index rmin = c2prev.R.back();
      Index witness = 0;
      for (Index e = d_prev + 1;; ++e) {
        meter.tick();
        if (e - d_prev > caps.search_cap) {
          throw SearchCapExceeded("chain-2 insertion witness not found under the cap");
        }
        if ((!lmax || sys.compare_ff(e, *lmax, caps) > 0) &&
            sys.compare_ff(e, rmin, caps) < 0) {
          witness = e;
          break;
        }
      }
      d_step = std::max(d_step, witness);
    }

    // condition-(ii) witness inside the previous chain-3 bracket
    const auto& c3prev = chains[2][n - 1];
    LinearForm a3 = sys.f(c3prev.L.back());
    LinearForm b3v = sys.f(c3prev.R.back());
    std::vector<LinearForm> cands = sys.g_candidates(a3, b3v, d_prev, caps, meter);
    auto [b1, b2] =
        sys.witness_bounds_from(cands, a3, b3v, d_prev, target, caps);

    // d' : smallest index past d_step whose depth places two f-values
    // strictly inside (b1, b2); b3 then sits in the gap between the lowest
    // two, so its truncated best approximations bracket it inside the
    // witness. Ordering the search this way also serves finite domains,
    // where a prematurely fixed b3 can leave no bracketing values at all.
    std::vector<Index> inside;
    for (Index e = 1; e <= d_step; ++e) {
      meter.tick();
      if (sys.compare_f_form(e, b1, caps) > 0 &&
          sys.compare_f_form(e, b2, caps) < 0) {
        inside.push_back(e);
      }
    }
    Index dp = d_step;  // d' strictly exceeds the step bound
    do {
      ++dp;
      meter.tick();
      if (dp - d_step > caps.search_cap) {
        throw SearchCapExceeded("d' scan exceeded the search cap");
      }
      if (sys.compare_f_form(dp, b1, caps) > 0 &&
          sys.compare_f_form(dp, b2, caps) < 0) {
        inside.push_back(dp);
      }
    } while (inside.size() < 2);
    std::sort(inside.begin(), inside.end(), [&](Index x, Index y) {
      return sys.compare_ff(x, y, caps) < 0;
    });
    Rational b3 = detail::pick_param_rational(sys, sys.f(inside[0]),
                                              sys.f(inside[1]), caps, true);
    LinearForm b3f = LinearForm::rational(sys.basis(), b3);
    ParamReal pb3(b3f);

    // chain 1: right-extend to d', then insert the smallest admissible d_n
    FiniteApproximation c1r =
        right_extension(sys, chains[0][n - 1], dp, caps, &meter, false);
    Index lback = c1r.L.back();
    Index rback = c1r.R.back();
    Index dn = 0;
    for (Index e = dp + 1;; ++e) {
      meter.tick();
      if (e - dp > caps.search_cap) {
        throw SearchCapExceeded("d_n scan exceeded the search cap");
      }
      if (sys.compare_ff(e, lback, caps) > 0 &&
          sys.compare_ff(e, rback, caps) < 0) {
        dn = e;
        break;
      }
    }
    if (dn > caps.depth_cap) {
      throw DepthExhausted("construction depth " + std::to_string(dn) +
                           " exceeds the depth cap");
    }
    ds.push_back(dn);
    FiniteApproximation c1{c1r.L, c1r.R, dn};
    c1.L.push_back(dn);
    detail::assert_invariant(is_finite_approximation(sys, c1, caps, &meter),
                             "chain1 validity");
    detail::assert_invariant(c1.L == ds, "(I)_n");
    detail::assert_invariant(dn >= max_idx, "(II)_n");
    chains[0].push_back(std::move(c1));

    // chain 2
    if (t == 1) {
      std::optional<Index> lmax;
      if (!c2prev.L.empty()) lmax = c2prev.L.back();
      Index rmin = c2prev.R.back();
      Index estar = 0;
      for (Index e = d_prev + 1; e < dn; ++e) {
        meter.tick();
        if ((!lmax || sys.compare_ff(e, *lmax, caps) > 0) &&
            sys.compare_ff(e, rmin, caps) < 0) {
          estar = e;
          break;
        }
      }
      detail::assert_invariant(estar != 0, "chain-2 insertion exists");
      FiniteApproximation ins{c2prev.L, c2prev.R, estar};
      ins.L.push_back(estar);
      detail::assert_invariant(is_finite_approximation(sys, ins, caps, &meter),
                               "chain2 insertion validity");
      chains[1].push_back(
          right_extension(sys, ins, dn, caps, &meter, false));
    } else {
      chains[1].push_back(
          right_extension(sys, c2prev, dn, caps, &meter, false));
    }
    {
      const auto& c2 = chains[1][n];
      detail::assert_invariant(is_finite_approximation(sys, c2, caps, &meter),
                               "chain2 validity");
      bool has = false;
      for (Index x : c2.L) has |= (x >= d_prev && x <= dn);
      detail::assert_invariant(has == (t == 1), "(III)_n");
    }

    // chain 3: the best-approximation trace of b3 up to d_n
    {
      FiniteApproximation c3{best_left(sys, pb3, dn, caps, &meter),
                             best_right(sys, pb3, dn, caps, &meter), dn};
      detail::assert_invariant(is_finite_approximation(sys, c3, caps, &meter),
                               "chain3 validity");
      detail::assert_invariant(
          std::includes(c3.L.begin(), c3.L.end(), c3prev.L.begin(), c3prev.L.end()) &&
              std::includes(c3.R.begin(), c3.R.end(), c3prev.R.begin(), c3prev.R.end()),
          "chain3 extends its predecessor");
      LinearForm nlo = sys.f(c3.L.back()), nhi = sys.f(c3.R.back());
      detail::assert_invariant(
          sign_of(nlo - b1, caps) > 0 && sign_of(b2 - nhi, caps) > 0,
          "(IV)_n bracket containment");
      // full (IV) check at a point of the new bracket, reusing candidates
      Rational probe = rational_between(nlo, nhi, caps);
      LinearForm pf = LinearForm::rational(sys.basis(), probe);
      Index best = 1;
      LinearForm bd = sign_of(pf - cands[0], caps) >= 0 ? pf - cands[0]
                                                        : cands[0] - pf;
      for (Index e = 2; e <= d_prev; ++e) {
        LinearForm dd = sign_of(pf - cands[e - 1], caps) >= 0
                            ? pf - cands[e - 1]
                            : cands[e - 1] - pf;
        if (sign_of(dd - bd, caps) < 0) {
          best = e;
          bd = std::move(dd);
        }
      }
      detail::assert_invariant(best == target, "(IV)_n selector value");
      chains[2].push_back(std::move(c3));
    }
  }

  // ---- assemble ----
  EncodedParameter out;
  out.system = desc;
  out.m = m;
  out.n_tuples = N;
  out.final_depth = ds.back();
  out.chains = chains;
  for (int i = 0; i < 3; ++i) {
    FormInterval fi = limit_interval(sys, nonempty_suffix(out.chains[i]), caps);
    Rational lo = rational_between(fi.lo, fi.hi, caps);
    Rational hi =
        rational_between(LinearForm::rational(sys.basis(), lo), fi.hi, caps);
    out.brackets[i] = RationalInterval(lo, hi);
  }
  return out;
}

inline EncodedParameter encode(const SystemDescriptor& desc, const TupleSet& A,
                               const Caps& caps = {}) {
  SystemPtr sys = make_system(desc, caps);
  return encode(*sys, desc, A, caps);
}

namespace detail {

inline void validate_parameter(const ApproximationSystem& sys,
                               const EncodedParameter& p, const Caps& caps) {
  if (p.m < 1) throw InvalidChain("parameter arity must be >= 1");
  std::size_t steps = p.m * p.n_tuples + 1;
  for (const auto& ch : p.chains) {
    if (ch.size() != steps) {
      throw InvalidChain("chain length does not match m*N+1 steps");
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (const auto& fa : p.chains[i]) {
      if (!is_finite_approximation(sys, fa, caps)) {
        throw InvalidChain("chain entry fails the validity check");
      }
    }
    FormInterval fi = limit_interval(sys, nonempty_suffix(p.chains[i]), caps);
    LinearForm lo = LinearForm::rational(sys.basis(), p.brackets[i].lo);
    LinearForm hi = LinearForm::rational(sys.basis(), p.brackets[i].hi);
    if (!(sign_of(lo - fi.lo, caps) > 0 && sign_of(fi.hi - hi, caps) > 0 &&
          p.brackets[i].lo <= p.brackets[i].hi)) {
      throw InvalidChain("bracket " + std::to_string(i) +
                         " is not strictly inside the chain's value bracket");
    }
  }
  // (I): chain-1 left sets are the prefixes of the d-sequence
  const auto& c1 = p.chains[0];
  for (std::size_t k = 0; k < steps; ++k) {
    if (c1[k].L.size() != k + 1) throw InvalidChain("(I) violated in chain 1");
    for (std::size_t j = 0; j < k; ++j) {
      if (c1[k].L[j] != c1[k - 1].L[j]) throw InvalidChain("(I) violated in chain 1");
    }
    if (c1[k].d != c1[k].L.back()) throw InvalidChain("chain-1 bound mismatch");
  }
}

}  // namespace detail

/// Decodes an encoder-produced parameter using the stored chain data: the
/// d-sequence is chain 1's final left set, X-membership reads chain 2, and
/// the selector arguments come from chain 3's per-step brackets with c3 the
/// stored rational bracket.
inline TupleSet decode(const ApproximationSystem& sys, const EncodedParameter& p,
                       std::optional<Index> count_opt = std::nullopt,
                       const Caps& caps = {}) {
  caps.validate();
  if (p.final_depth > caps.depth_cap) {
    throw DepthExhausted("parameter depth exceeds the depth cap");
  }
  WorkMeter meter(caps.work_budget);
  detail::validate_parameter(sys, p, caps);
  Index count = count_opt.value_or(p.n_tuples);
  if (count > p.n_tuples) {
    throw DepthExhausted("stored chains certify only " +
                         std::to_string(p.n_tuples) + " tuples");
  }
  const std::vector<Index>& dseq = p.chains[0].back().L;
  const std::vector<Index>& L2 = p.chains[1].back().L;
  ParamReal c3(p.brackets[2], sys.basis());

  TupleSet out;
  out.m = p.m;
  for (Index s = 0; s < count; ++s) {
    Index k = p.m * s;
    // X membership: L(c2) meets [d_{ms}, d_{ms+1}]
    bool member = false;
    for (Index x : L2) member |= (x >= dseq[k] && x <= dseq[k + 1]);
    if (!member) {
      throw InvalidChain("X membership fails at tuple " + std::to_string(s));
    }
    std::vector<Index> tup;
    tup.reserve(p.m);
    for (Index i = 1; i <= p.m; ++i) {
      const FiniteApproximation& c3e = p.chains[2][k + i - 1];
      LinearForm a = sys.f(c3e.L.back());
      LinearForm b = sys.f(c3e.R.back());
      tup.push_back(sys.g(c3, a, b, dseq[k + i - 1], caps, meter));
    }
    out.tuples.push_back(std::move(tup));
  }
  return out;
}

/// Decodes directly from three parameter reals via best-approximation sets,
/// the raw-real path of Y_c. Emits at most `count` tuples; a tuple whose
/// coordinate chain runs past `depth` raises DepthExhausted.
inline TupleSet decode_raw(const ApproximationSystem& sys, const ParamReal& c1,
                           const ParamReal& c2, const ParamReal& c3, Index m,
                           Index count, Index depth, const Caps& caps = {}) {
  caps.validate();
  if (m < 1) throw InvalidInput("decode: arity must be >= 1");
  if (depth > caps.depth_cap) {
    throw DepthExhausted("requested depth exceeds the depth cap");
  }
  WorkMeter meter(caps.work_budget);
  std::vector<Index> L1 = best_left(sys, c1, depth, caps, &meter);
  std::vector<Index> L2 = best_left(sys, c2, depth, caps, &meter);
  std::vector<Index> L3 = best_left(sys, c3, depth, caps, &meter);
  std::vector<Index> R3 = best_right(sys, c3, depth, caps, &meter);

  TupleSet out;
  out.m = m;
  for (std::size_t k = 0; out.tuples.size() < count && k + 1 < L1.size(); ++k) {
    Index e = L1[k];
    Index succ = L1[k + 1];
    bool member = false;
    for (Index x : L2) member |= (x >= e && x <= succ);
    if (!member) continue;
    // coordinates need delta^{i-1}(e) for i = 1..m
    if (k + m - 1 >= L1.size()) {
      throw DepthExhausted("tuple at e=" + std::to_string(e) +
                           " needs successors beyond depth");
    }
    std::vector<Index> tup;
    tup.reserve(m);
    for (Index i = 1; i <= m; ++i) {
      Index dd = L1[k + i - 1];
      // max f(L(c3) cap D<=dd) and min f(R(c3) cap D<=dd)
      Index lb = 0, rb = 0;
      for (Index x : L3) {
        if (x <= dd) lb = x;
      }
      for (Index x : R3) {
        if (x <= dd) rb = x;
      }
      if (lb == 0 || rb == 0) {
        throw InvalidInput("best-approximation prefix of c3 empty at depth " +
                           std::to_string(dd));
      }
      tup.push_back(sys.g(c3, sys.f(lb), sys.f(rb), dd, caps, meter));
    }
    out.tuples.push_back(std::move(tup));
  }
  return out;
}

/// Open rational box in U^m (the per-dimension intervals are read as open).
struct RationalBox {
  std::vector<RationalInterval> dims;
};

/// Inner cover of an open union-of-boxes W by f-boxes: every emitted index
/// tuple (s_1..s_m, r_1..r_m) spans a box inside W, and the union covers
/// each input box shrunk by `margin` on every side. Overlap comes from
/// skip-one pairs of consecutive f-values, whose union per dimension is the
/// open span of the values found.
inline std::vector<std::vector<Index>> cover_open_set(
    const ApproximationSystem& sys, const std::vector<RationalBox>& W,
    const Rational& margin, Index depth, const Caps& caps = {}) {
  if (margin <= 0) throw InvalidInput("cover: margin must be positive");
  Index limit = std::min<Index>(depth, sys.max_index());
  std::set<std::vector<Index>> out;
  for (const auto& box : W) {
    if (box.dims.empty()) throw InvalidInput("cover: zero-dimensional box");
    bool skip = false;
    for (const auto& iv : box.dims) {
      if (iv.lo + margin > iv.hi - margin) skip = true;  // shrunken side empty
    }
    if (skip) continue;
    // per-dimension families of (s, r) index pairs
    std::vector<std::vector<std::pair<Index, Index>>> fam(box.dims.size());
    for (std::size_t j = 0; j < box.dims.size(); ++j) {
      const auto& iv = box.dims[j];
      LinearForm lo = LinearForm::rational(sys.basis(), iv.lo);
      LinearForm hi = LinearForm::rational(sys.basis(), iv.hi);
      std::vector<Index> inside;
      for (Index e = 1; e <= limit; ++e) {
        if (sys.compare_f_form(e, lo, caps) > 0 &&
            sys.compare_f_form(e, hi, caps) < 0) {
          inside.push_back(e);
        }
      }
      std::sort(inside.begin(), inside.end(),
                [&](Index x, Index y) { return sys.compare_ff(x, y, caps) < 0; });
      LinearForm shrunk_lo = LinearForm::rational(sys.basis(), iv.lo + margin);
      LinearForm shrunk_hi = LinearForm::rational(sys.basis(), iv.hi - margin);
      if (inside.size() < 2 ||
          sys.compare_f_form(inside.front(), shrunk_lo, caps) >= 0 ||
          sys.compare_f_form(inside.back(), shrunk_hi, caps) <= 0) {
        throw DepthExhausted(
            "cover: density within depth cannot realize the margin");
      }
      if (inside.size() == 2) {
        fam[j].push_back({inside[0], inside[1]});
      } else {
        for (std::size_t i = 1; i + 1 < inside.size(); ++i) {
          fam[j].push_back({inside[i - 1], inside[i + 1]});
        }
      }
    }
    // cartesian product across dimensions
    std::vector<std::size_t> pick(box.dims.size(), 0);
    for (;;) {
      std::vector<Index> tup(2 * box.dims.size());
      for (std::size_t j = 0; j < box.dims.size(); ++j) {
        tup[j] = fam[j][pick[j]].first;
        tup[box.dims.size() + j] = fam[j][pick[j]].second;
      }
      out.insert(std::move(tup));
      std::size_t j = 0;
      while (j < pick.size() && ++pick[j] == fam[j].size()) {
        pick[j] = 0;
        ++j;
      }
      if (j == pick.size()) break;
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace approxcodec
