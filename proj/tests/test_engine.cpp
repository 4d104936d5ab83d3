#include <catch_amalgamated.hpp>

#include "approxcodec/approxcodec.hpp"

using namespace approxcodec;

namespace {

SystemPtr kron23() {
  static SystemPtr s = make_system(SystemDescriptor::kronecker_sqrt(2, 3));
  return s;
}

ParamReal rat_param(const SystemPtr& s, const Rational& q) {
  return ParamReal(LinearForm::rational(s->basis(), q));
}

/// Literal quadratic-time Definition 1: d is a best left approximation of c
/// iff f(d) < c and no earlier f-value lies strictly between f(d) and c.
std::vector<Index> oracle_left(const ApproximationSystem& sys, const LinearForm& c,
                               Index depth) {
  std::vector<Index> out;
  for (Index d = 1; d <= depth; ++d) {
    LinearForm fd = sys.f(d);
    if (sign_of(c - fd) <= 0) continue;
    bool blocked = false;
    for (Index e = 1; e < d && !blocked; ++e) {
      LinearForm fe = sys.f(e);
      blocked = sign_of(fe - fd) > 0 && sign_of(c - fe) > 0;
    }
    if (!blocked) out.push_back(d);
  }
  return out;
}

std::vector<Index> oracle_right(const ApproximationSystem& sys, const LinearForm& c,
                                Index depth) {
  std::vector<Index> out;
  for (Index d = 1; d <= depth; ++d) {
    LinearForm fd = sys.f(d);
    if (sign_of(fd - c) <= 0) continue;
    bool blocked = false;
    for (Index e = 1; e < d && !blocked; ++e) {
      LinearForm fe = sys.f(e);
      blocked = sign_of(fd - fe) > 0 && sign_of(fe - c) > 0;
    }
    if (!blocked) out.push_back(d);
  }
  return out;
}

Rational rand_c_in_u(SplitMix64& rng) {
  // rationals well inside (0, sqrt(3))
  return Rational(1 + rng.bounded(1700), 17) / Rational(59);
}

/// Valid pair from a random parameter's truncated best approximations.
FiniteApproximation random_valid(const SystemPtr& s, SplitMix64& rng, Index dmax) {
  for (;;) {
    Index d = 2 + rng.bounded(dmax - 1);
    Rational c = rand_c_in_u(rng);
    ParamReal pc = rat_param(s, c);
    FiniteApproximation fa{best_left(*s, pc, d), best_right(*s, pc, d), d};
    if (!fa.L.empty() && !fa.R.empty()) return fa;
  }
}

}  // namespace

TEST_CASE("best approximations: frozen spec values") {
  SystemPtr s = kron23();
  ParamReal half = rat_param(s, Rational(1, 2));
  CHECK(best_left(*s, half, 7) == std::vector<Index>{2});
  CHECK(best_right(*s, half, 7) == std::vector<Index>{1, 4});

  // depth 1: f(1) = 1
  ParamReal c2 = rat_param(s, Rational(3, 2));
  CHECK(best_left(*s, c2, 1) == std::vector<Index>{1});
  CHECK(best_right(*s, c2, 1).empty());
  CHECK(best_left(*s, half, 1).empty());
  CHECK(best_right(*s, half, 1) == std::vector<Index>{1});
}

TEST_CASE("best approximations agree with the quadratic oracle") {
  SystemPtr s = kron23();
  SplitMix64 rng(101);
  for (int it = 0; it < 60; ++it) {
    Rational c = rand_c_in_u(rng);
    Index depth = 1 + rng.bounded(200);
    LinearForm cf = LinearForm::rational(s->basis(), c);
    ParamReal pc(cf);
    auto L = best_left(*s, pc, depth);
    auto R = best_right(*s, pc, depth);
    CHECK(L == oracle_left(*s, cf, depth));
    CHECK(R == oracle_right(*s, cf, depth));
    if (!L.empty() && !R.empty()) {  // sandwich
      CHECK(sign_of(cf - s->f(L.back())) > 0);
      CHECK(sign_of(s->f(R.back()) - cf) > 0);
    }
  }
}

TEST_CASE("interval parameters refuse unresolvable comparisons") {
  SystemPtr s = kron23();
  // bracket straddling f(2) = 2 - sqrt(3) ~ 0.2679
  ParamReal wide(RationalInterval(Rational(1, 4), Rational(3, 10)), s->basis());
  CHECK_THROWS_AS(best_left(*s, wide, 7), PrecisionCapExceeded);
  // bracket inside a gap resolves fine
  ParamReal narrow(RationalInterval(Rational(2, 5), Rational(41, 100)), s->basis());
  CHECK(best_left(*s, narrow, 7) == std::vector<Index>{2});
}

TEST_CASE("is_finite_approximation: frozen examples") {
  SystemPtr s = kron23();
  CHECK(is_finite_approximation(*s, FiniteApproximation{{2}, {1, 4}, 7}));
  CHECK_FALSE(is_finite_approximation(*s, FiniteApproximation{{}, {}, 1}));
  CHECK_FALSE(is_finite_approximation(*s, FiniteApproximation{{}, {}, 5}));
  CHECK(is_finite_approximation(*s, FiniteApproximation{{}, {}, 0}));  // base case
  CHECK_FALSE(is_finite_approximation(*s, FiniteApproximation{{1}, {1}, 1}));
  // clause 2 violation: f not increasing along L = {2, 7}
  CHECK_FALSE(is_finite_approximation(*s, FiniteApproximation{{2, 7}, {1, 4}, 7}));
}

TEST_CASE("recoverability_check: frozen example and errors") {
  SystemPtr s = kron23();
  FiniteApproximation good{{2}, {1, 4}, 7};
  // the gap is (2 - sqrt3, 4 - 2*sqrt3), which contains 2/5
  CHECK(recoverability_check(*s, good));
  FiniteApproximation swapped{{1}, {2}, 2};  // f(1) = 1 > f(2)
  CHECK_THROWS_AS(recoverability_check(*s, swapped), EmptyGap);
  CHECK_THROWS_AS(recoverability_check(*s, {{}, {1}, 1}), InvalidInput);
}

TEST_CASE("lemma: validity iff recoverability, on valid and mutated pairs") {
  SystemPtr s = kron23();
  SplitMix64 rng(103);
  int agreements = 0;
  for (int it = 0; it < 150; ++it) {
    FiniteApproximation fa = random_valid(s, rng, 30);
    switch (rng.bounded(4)) {
      case 0:
        break;  // keep valid
      case 1:  // drop a left element
        if (fa.L.size() > 1) fa.L.erase(fa.L.begin() + rng.bounded(fa.L.size()));
        break;
      case 2: {  // inject a random index
        Index x = 1 + rng.bounded(fa.d);
        auto& side = rng.bounded(2) ? fa.L : fa.R;
        side.push_back(x);
        std::sort(side.begin(), side.end());
        side.erase(std::unique(side.begin(), side.end()), side.end());
        break;
      }
      case 3:  // swap one element across sides
        if (!fa.R.empty()) {
          Index x = fa.R[rng.bounded(fa.R.size())];
          fa.R.erase(std::find(fa.R.begin(), fa.R.end(), x));
          fa.L.push_back(x);
          std::sort(fa.L.begin(), fa.L.end());
        }
        break;
    }
    if (fa.L.empty() || fa.R.empty()) continue;
    bool valid = is_finite_approximation(*s, fa);
    bool recoverable;
    try {
      recoverable = recoverability_check(*s, fa);
    } catch (const EmptyGap&) {
      recoverable = false;
    }
    CAPTURE(fa.L, fa.R, fa.d);
    CHECK(valid == recoverable);
    ++agreements;
  }
  CHECK(agreements > 100);
}

TEST_CASE("right_extension: frozen example, identity, composition") {
  SystemPtr s = kron23();
  FiniteApproximation start{{2}, {1}, 2};
  FiniteApproximation ext = right_extension(*s, start, 4);
  CHECK(ext.L == std::vector<Index>{2});
  CHECK(ext.R == std::vector<Index>{1, 4});
  CHECK(ext.d == 4);

  CHECK(right_extension(*s, ext, 4) == ext);  // no new indices

  SplitMix64 rng(107);
  for (int it = 0; it < 40; ++it) {
    FiniteApproximation fa = random_valid(s, rng, 20);
    Index d2 = fa.d + rng.bounded(15);
    Index d3 = d2 + rng.bounded(15);
    FiniteApproximation once = right_extension(*s, fa, d3);
    FiniteApproximation twice =
        right_extension(*s, right_extension(*s, fa, d2), d3);
    CHECK(once == twice);
    CHECK(is_finite_approximation(*s, once));
  }

  CHECK_THROWS_AS(right_extension(*s, FiniteApproximation{{1}, {1}, 1}, 5),
                  InvalidInput);
  CHECK_THROWS_AS(right_extension(*s, start, 1), InvalidInput);
}

TEST_CASE("right_extension is the unique left-preserving extension") {
  SystemPtr s = kron23();
  SplitMix64 rng(109);
  for (int it = 0; it < 25; ++it) {
    FiniteApproximation fa = random_valid(s, rng, 8);
    Index d2 = std::min<Index>(fa.d + 1 + rng.bounded(5), 12);
    FiniteApproximation got = right_extension(*s, fa, d2);
    // enumerate all candidate R-additions from (d, d2]
    std::vector<Index> pool;
    for (Index e = fa.d + 1; e <= d2; ++e) pool.push_back(e);
    int valid_count = 0;
    for (std::uint64_t mask = 0; mask < (1ull << pool.size()); ++mask) {
      FiniteApproximation cand{fa.L, fa.R, d2};
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (mask & (1ull << i)) cand.R.push_back(pool[i]);
      }
      if (is_finite_approximation(*s, cand)) {
        ++valid_count;
        CHECK(cand == got);
      }
    }
    CHECK(valid_count == 1);
  }
}

TEST_CASE("splitting: frozen examples, minimality, monotonicity") {
  SystemPtr s = kron23();
  CHECK(splits_between(*s, 1, 2));  // vacuous
  CHECK(splits_between(*s, 2, 7));  // f(4) lands between f(2) and f(1)
  CHECK_FALSE(splits_between(*s, 2, 3));
  CHECK_THROWS_AS(splits_between(*s, 3, 3), InvalidInput);

  CHECK(find_split(*s, 1) == 2);

  SplitMix64 rng(113);
  for (int it = 0; it < 20; ++it) {
    Index d1 = 1 + rng.bounded(40);
    Index d2 = find_split(*s, d1);
    CHECK(d2 > d1);
    CHECK(splits_between(*s, d1, d2));
    if (d2 > d1 + 1) CHECK_FALSE(splits_between(*s, d1, d2 - 1));
    CHECK(splits_between(*s, d1, d2 + 1 + rng.bounded(20)));  // monotone
  }
}

TEST_CASE("successor walks L(c1)") {
  SystemPtr s = kron23();
  ParamReal half = rat_param(s, Rational(2, 5));
  auto L = best_left(*s, half, 40);
  REQUIRE(L.size() >= 2);
  for (std::size_t i = 0; i + 1 < L.size(); ++i) {
    CHECK(successor(*s, half, L[i], 40) == L[i + 1]);
  }
  CHECK_THROWS_AS(successor(*s, half, L.back(), 40), DepthExhausted);
  CHECK_THROWS_AS(successor(*s, half, L.back() + 1, 40), InvalidInput);
}

TEST_CASE("limit_interval: brackets and validation") {
  SystemPtr s = kron23();
  FiniteApproximation fa{{2}, {1, 4}, 7};
  FormInterval iv = limit_interval(*s, {fa});
  CHECK(iv.lo == s->f(2));
  CHECK(iv.hi == s->f(4));

  // widths nonincreasing along an honest chain
  SplitMix64 rng(127);
  Rational c = rand_c_in_u(rng);
  ParamReal pc = rat_param(s, c);
  ApproximationChain chain;
  for (Index d : {5, 9, 23, 55}) {
    chain.push_back({best_left(*s, pc, d), best_right(*s, pc, d), d});
  }
  REQUIRE_NOTHROW(limit_interval(*s, chain));
  for (std::size_t i = 1; i < chain.size(); ++i) {
    FormInterval a = limit_interval(*s, {chain[i - 1]});
    FormInterval b = limit_interval(*s, {chain[i]});
    CHECK(sign_of((a.hi - a.lo) - (b.hi - b.lo)) >= 0);
  }

  CHECK_THROWS_AS(limit_interval(*s, {}), InvalidChain);
  CHECK_THROWS_AS(limit_interval(*s, {FiniteApproximation{{}, {1}, 2}}),
                  InvalidChain);
  ApproximationChain bad = {chain[1], chain[0]};  // d not increasing
  CHECK_THROWS_AS(limit_interval(*s, bad), InvalidChain);
}
