#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "approxcodec/errors.hpp"

namespace approxcodec {

/// Arbitrary-precision rational, always in lowest terms (mpq_class keeps the
/// canonical form after every arithmetic operation).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q" (decimal). Rejects zero denominators.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0) {
    throw ParseError("invalid rational literal: '" + s + "'");
  }
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0) {
    throw ParseError("zero denominator in rational literal: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

/// Outward-rounded double bounds of an exact rational.
struct DoubleIv {
  double lo = 0.0;
  double hi = 0.0;
};

inline DoubleIv to_double_iv(const Rational& q) {
  // mpq_get_d truncates toward zero; one nextafter step on each side makes
  // the enclosure safe.
  const double d = q.get_d();
  return {std::nextafter(d, -std::numeric_limits<double>::infinity()),
          std::nextafter(d, std::numeric_limits<double>::infinity())};
}

/// Simplest rational (minimal denominator, then minimal |numerator|) strictly
/// inside the open interval (lo, hi). Stern-Brocot / continued-fraction walk.
inline Rational simplest_in_open(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw InvalidInput("simplest_in_open: empty interval");
  // An integer strictly inside wins immediately.
  Integer n = floor_of(lo) + 1;
  if (Rational(n) < hi) {
    if (Rational(n) > lo) return Rational(n);
  }
  Integer fl = floor_of(lo);
  Rational a = lo - Rational(fl);
  Rational b = hi - Rational(fl);
  // Now 0 <= a < b <= 1 is false in general for b; but no integer lies
  // strictly inside, so b <= 1 + a and the reciprocal step is well-defined.
  if (a == 0) {
    // (fl, hi): pick fl + 1/k with k the smallest integer > 1/b.
    Integer k = floor_of(1 / b) + 1;
    return Rational(fl) + Rational(1) / Rational(k);
  }
  Rational inner = simplest_in_open(1 / b, 1 / a);
  return Rational(fl) + 1 / inner;
}

/// Midpoint helper.
inline Rational midpoint(const Rational& a, const Rational& b) {
  return (a + b) / 2;
}

/// Exact 2^e for signed e.
inline Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

}  // namespace approxcodec
