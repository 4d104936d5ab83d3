#pragma once

#include "approxcodec/errors.hpp"
#include "approxcodec/rational.hpp"

namespace approxcodec {

/// Closed interval with exact rational endpoints, lo <= hi.
struct RationalInterval {
  Rational lo;
  Rational hi;

  RationalInterval() : lo(0), hi(0) {}
  RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (this->lo > this->hi) throw InvalidInput("interval with lo > hi");
  }

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const RationalInterval& o) const {
    return lo <= o.lo && o.hi <= hi;
  }
  bool operator==(const RationalInterval&) const = default;
};

inline RationalInterval intersect(const RationalInterval& a,
                                  const RationalInterval& b) {
  Rational lo = a.lo > b.lo ? a.lo : b.lo;
  Rational hi = a.hi < b.hi ? a.hi : b.hi;
  if (lo > hi) throw InvalidInput("empty intersection");
  return {lo, hi};
}

}  // namespace approxcodec
