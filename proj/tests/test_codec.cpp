#include <catch_amalgamated.hpp>

#include "approxcodec/approxcodec.hpp"

using namespace approxcodec;

namespace {

SystemDescriptor kdesc() { return SystemDescriptor::kronecker_sqrt(2, 3); }

std::vector<Rational> van_der_corput(unsigned n) {
  std::vector<Rational> out;
  for (unsigned i = 1; i <= n; ++i) {
    unsigned r = 0, x = i, len = 0;
    while (x) {
      r = (r << 1) | (x & 1);
      x >>= 1;
      ++len;
    }
    Rational q(r, 1u << len);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

Rational rand_inside(SplitMix64& rng, const RationalInterval& iv) {
  Rational t(1 + rng.bounded(97), 99);
  t.canonicalize();
  return iv.lo + t * (iv.hi - iv.lo);
}

}  // namespace

TEST_CASE("encode/decode round trip: single tuple") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet A{1, {{1}}};
  EncodedParameter p = encode(*s, d, A);
  CHECK(p.m == 1);
  CHECK(p.n_tuples == 1);
  CHECK(p.final_depth == p.chains[0].back().L.back());
  CHECK(decode(*s, p) == A);
}

TEST_CASE("encoder chain structure: (I), (III), nesting") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet A{2, {{3, 1}}};  // m = 2, N = 1: two construction steps
  EncodedParameter p = encode(*s, d, A);

  const auto& c1 = p.chains[0];
  REQUIRE(c1.size() == 3);
  for (std::size_t n = 0; n < c1.size(); ++n) {
    CHECK(c1[n].L.size() == n + 1);  // property (I)
  }
  // property (III): chain 2 gains a left point in step 1 (t=1), none in step 2
  const auto& c2 = p.chains[1];
  CHECK(c2[0].L.empty());
  CHECK(c2[1].L.size() == 1);
  CHECK(c2[2].L.size() == 1);
  Index e = c2[1].L[0];
  CHECK(e > c1[0].d);
  CHECK(e < c1[1].d);

  // brackets nested along every chain
  for (const auto& chain : p.chains) {
    ApproximationChain ne = nonempty_suffix(chain);
    for (std::size_t i = 1; i < ne.size(); ++i) {
      FormInterval a = limit_interval(*s, {ne[i - 1]});
      FormInterval b = limit_interval(*s, {ne[i]});
      CHECK(sign_of(b.lo - a.lo) >= 0);
      CHECK(sign_of(a.hi - b.hi) >= 0);
    }
  }

  CHECK(decode(*s, p) == A);
}

TEST_CASE("decode: prefix counts and bounds") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet A{1, {{2}, {1}}};
  EncodedParameter p = encode(*s, d, A);
  CHECK(decode(*s, p) == A);

  TupleSet first = decode(*s, p, Index(1));
  CHECK(first.tuples == std::vector<std::vector<Index>>{{2}});
  TupleSet none = decode(*s, p, Index(0));
  CHECK(none.tuples.empty());
  CHECK_THROWS_AS(decode(*s, p, Index(3)), DepthExhausted);
}

TEST_CASE("raw-real decode agrees with the chain path on bracket points") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet A{2, {{2, 4}}};
  EncodedParameter p = encode(*s, d, A);
  TupleSet via_chains = decode(*s, p);
  REQUIRE(via_chains == A);

  SplitMix64 rng(401);
  for (int rep = 0; rep < 3; ++rep) {
    ParamReal c1(LinearForm::rational(s->basis(), rand_inside(rng, p.brackets[0])));
    ParamReal c2(LinearForm::rational(s->basis(), rand_inside(rng, p.brackets[1])));
    ParamReal c3(LinearForm::rational(s->basis(), rand_inside(rng, p.brackets[2])));
    TupleSet raw = decode_raw(*s, c1, c2, c3, p.m, p.n_tuples, p.final_depth);
    CHECK(raw == A);
  }

  // the interval parameters themselves also decode on the raw path
  ParamReal b1(p.brackets[0], s->basis());
  ParamReal b2(p.brackets[1], s->basis());
  ParamReal b3(p.brackets[2], s->basis());
  CHECK(decode_raw(*s, b1, b2, b3, p.m, p.n_tuples, p.final_depth) == A);
}

TEST_CASE("successor of the encoded d-sequence follows the chain") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet A{1, {{1}, {3}}};
  EncodedParameter p = encode(*s, d, A);
  const auto& dseq = p.chains[0].back().L;
  SplitMix64 rng(403);
  ParamReal c1(LinearForm::rational(s->basis(), rand_inside(rng, p.brackets[0])));
  for (std::size_t i = 0; i + 1 < dseq.size(); ++i) {
    CHECK(successor(*s, c1, dseq[i], p.final_depth) == dseq[i + 1]);
  }
}

TEST_CASE("X_c of an encoded parameter marks every m-th step") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet A{2, {{1, 2}}};
  EncodedParameter p = encode(*s, d, A);
  const auto& dseq = p.chains[0].back().L;
  const auto& L2 = p.chains[1].back().L;
  // membership exactly at k = 0 (tuple start), not at k = 1
  auto meets = [&](Index lo, Index hi) {
    for (Index x : L2) {
      if (x >= lo && x <= hi) return true;
    }
    return false;
  };
  CHECK(meets(dseq[0], dseq[1]));
  CHECK_FALSE(meets(dseq[1], dseq[2]));
}

TEST_CASE("input validation: duplicates, empty, field injectivity") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  TupleSet dup{1, {{2}, {2}}};
  CHECK_THROWS_AS(dup.validate(), DuplicateTuple);
  CHECK_THROWS_AS(encode(*s, d, dup), DuplicateTuple);
  TupleSet empty{1, {}};
  CHECK_THROWS_AS(encode(*s, d, empty), InvalidInput);
  TupleSet zero{1, {{0}}};
  CHECK_THROWS_AS(encode(*s, d, zero), InvalidInput);

  std::vector<Rational> dup_table{Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  SystemDescriptor fd = SystemDescriptor::field(dup_table);
  SystemPtr fs = make_system(fd);
  TupleSet A{1, {{1}}};
  CHECK_THROWS_AS(encode(*fs, fd, A), InvalidInput);
}

TEST_CASE("condition_iv_witness: selector constant on the witness") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  // a chain-3-like pair around 2/5 at depth 9
  ParamReal c(LinearForm::rational(s->basis(), Rational(2, 5)));
  FiniteApproximation fa{best_left(*s, c, 9), best_right(*s, c, 9), 9};
  REQUIRE(is_finite_approximation(*s, fa));
  Caps caps;
  for (Index target = 1; target <= 6; ++target) {
    auto [b1, b2] = condition_iv_witness(*s, fa, 6, target, caps);
    CHECK(sign_of(b2 - b1) > 0);
    LinearForm a3 = s->f(fa.L.back()), r3 = s->f(fa.R.back());
    CHECK(sign_of(b1 - a3) >= 0);
    CHECK(sign_of(r3 - b2) >= 0);
    Rational mid = rational_between(b1, b2, caps);
    WorkMeter meter(caps.work_budget);
    CHECK(s->g(ParamReal(LinearForm::rational(s->basis(), mid)), a3, r3, 6, caps,
               meter) == target);
  }
  CHECK_THROWS_AS(condition_iv_witness(*s, fa, 6, 7, caps), InvalidInput);
}

TEST_CASE("cover_open_set") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  Caps caps;

  CHECK(cover_open_set(*s, {}, Rational(1, 10), 50, caps).empty());

  RationalBox box{{RationalInterval(Rational(1, 4), Rational(5, 4))}};
  Rational margin(1, 20);
  auto boxes = cover_open_set(*s, {box}, margin, 200, caps);
  REQUIRE_FALSE(boxes.empty());
  LinearForm lo = LinearForm::rational(s->basis(), box.dims[0].lo);
  LinearForm hi = LinearForm::rational(s->basis(), box.dims[0].hi);
  for (const auto& t : boxes) {
    REQUIRE(t.size() == 2);
    // emitted f-box strictly inside W
    CHECK(s->compare_f_form(t[0], lo, caps) > 0);
    CHECK(s->compare_f_form(t[1], hi, caps) < 0);
    CHECK(s->compare_ff(t[0], t[1], caps) < 0);
  }
  // coverage of the shrunken interval: glue the emitted open intervals
  LinearForm shrunk_lo = LinearForm::rational(s->basis(), box.dims[0].lo + margin);
  LinearForm shrunk_hi = LinearForm::rational(s->basis(), box.dims[0].hi - margin);
  std::vector<std::pair<Index, Index>> segs;
  for (const auto& t : boxes) segs.push_back({t[0], t[1]});
  std::sort(segs.begin(), segs.end(), [&](auto x, auto y) {
    return s->compare_ff(x.first, y.first, caps) < 0;
  });
  CHECK(s->compare_f_form(segs.front().first, shrunk_lo, caps) < 0);
  Index reach = segs.front().second;
  for (std::size_t i = 1; i < segs.size(); ++i) {
    // next segment must start strictly below the current reach (overlap)
    if (s->compare_f_form(reach, shrunk_hi, caps) > 0) break;
    CHECK(s->compare_ff(segs[i].first, reach, caps) < 0);
    if (s->compare_ff(segs[i].second, reach, caps) > 0) reach = segs[i].second;
  }
  CHECK(s->compare_f_form(reach, shrunk_hi, caps) > 0);

  // a 2-dimensional box on the field system
  SystemDescriptor fd = SystemDescriptor::field(van_der_corput(64));
  SystemPtr fs = make_system(fd);
  RationalBox b2{{RationalInterval(Rational(1, 8), Rational(7, 8)),
                  RationalInterval(Rational(1, 4), Rational(3, 4))}};
  auto boxes2 = cover_open_set(*fs, {b2}, Rational(1, 16), 64, caps);
  REQUIRE_FALSE(boxes2.empty());
  for (const auto& t : boxes2) REQUIRE(t.size() == 4);

  // unreachable margin within depth
  CHECK_THROWS_AS(
      cover_open_set(*s, {box}, Rational(1, 1000000), 10, caps),
      DepthExhausted);
}

TEST_CASE("roundtrip report: determinism and small full-success runs") {
  SystemDescriptor d = kdesc();
  RoundtripLimits lim{1, 1, 1, 1, 3};

  RoundtripReport empty = roundtrip(d, 0, 7, lim);
  CHECK(empty.trials == 0);
  CHECK(empty.successes == 0);
  CHECK(empty.results.empty());

  RoundtripReport a = roundtrip(d, 5, 42, lim);
  RoundtripReport b = roundtrip(d, 5, 42, lim, Caps{}, 4);
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());
  CHECK(a.successes == 5);

  RoundtripReport c = roundtrip(d, 5, 43, lim);
  CHECK(report_to_json(a).dump() != report_to_json(c).dump());
}

TEST_CASE("field-system round trip at table scale") {
  // a 64-entry table has to refine exactly where the construction digs;
  // this one cascades around the two single-tuple traces
  std::vector<Rational> table{
      Rational(1, 2),   Rational(1, 4),    Rational(3, 8),   Rational(1, 8),
      Rational(25, 64), Rational(5, 16),   Rational(3, 16),  Rational(1, 16),
      Rational(5, 32),  Rational(39, 256), Rational(35, 256)};
  for (unsigned k = 0; table.size() < 64; ++k) {
    table.push_back(Rational(2 * k + 1, 1024));
  }
  SystemDescriptor fd = SystemDescriptor::field(table);
  SystemPtr fs = make_system(fd);
  for (Index idx : {1, 2}) {
    TupleSet A{1, {{idx}}};
    EncodedParameter p = encode(*fs, fd, A);
    CHECK(decode(*fs, p) == A);
    CHECK(p.final_depth <= 64);
  }

  // generic low-discrepancy tables run out of depth even for one tuple:
  // the right extensions squeeze the working gap below the table's finest
  // resolution, and the scans report the exhausted domain
  SystemDescriptor vd = SystemDescriptor::field(van_der_corput(64));
  SystemPtr vs = make_system(vd);
  TupleSet A{1, {{1}}};
  CHECK_THROWS_AS(encode(*vs, vd, A), DepthExhausted);
}

TEST_CASE("sine-system round trip, single tuple") {
  SystemDescriptor sd = SystemDescriptor::sine(64);
  SystemPtr s = make_system(sd);
  TupleSet A{1, {{2}}};
  EncodedParameter p = encode(*s, sd, A);
  CHECK(decode(*s, p) == A);
}

TEST_CASE("work budget turns runaway encodes into clean cap errors") {
  SystemDescriptor d = kdesc();
  SystemPtr s = make_system(d);
  Caps tiny;
  tiny.work_budget = 2000;
  TupleSet A{2, {{5, 3}, {1, 2}}};  // four steps: far beyond a tiny budget
  CHECK_THROWS_AS(encode(*s, d, A, tiny), WorkBudgetExceeded);
}
