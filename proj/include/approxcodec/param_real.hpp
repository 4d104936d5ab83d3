#pragma once

#include <variant>

#include "approxcodec/caps.hpp"
#include "approxcodec/errors.hpp"
#include "approxcodec/interval.hpp"
#include "approxcodec/linear_form.hpp"

namespace approxcodec {

/// A real parameter given either exactly (a linear form) or as a rational
/// bracket carrying the promise that the surrounding computation is constant
/// on it. A comparison the bracket cannot resolve is an error, never a guess.
class ParamReal {
 public:
  ParamReal(LinearForm f) : v_(std::move(f)) {}
  ParamReal(RationalInterval iv, BasisPtr basis)
      : v_(Bracket{std::move(iv), std::move(basis)}) {}

  bool is_exact() const { return std::holds_alternative<LinearForm>(v_); }
  const LinearForm& exact() const { return std::get<LinearForm>(v_); }
  const RationalInterval& bracket() const { return std::get<Bracket>(v_).iv; }

  const BasisPtr& basis() const {
    if (is_exact()) return exact().basis();
    return std::get<Bracket>(v_).basis;
  }

  /// Sign of (c - x) when resolvable; PrecisionCapExceeded when the bracket
  /// straddles x.
  int compare_with(const LinearForm& x, const Caps& caps = {}) const {
    if (is_exact()) return sign_of(exact() - x, caps);
    const Bracket& b = std::get<Bracket>(v_);
    LinearForm lo = LinearForm::rational(b.basis, b.iv.lo);
    if (sign_of(lo - x, caps) > 0) return 1;
    LinearForm hi = LinearForm::rational(b.basis, b.iv.hi);
    if (sign_of(hi - x, caps) < 0) return -1;
    throw PrecisionCapExceeded(
        "interval parameter cannot resolve a comparison; the bracket "
        "straddles the compared value");
  }

  LinearForm lo_form() const {
    if (is_exact()) return exact();
    const Bracket& b = std::get<Bracket>(v_);
    return LinearForm::rational(b.basis, b.iv.lo);
  }
  LinearForm hi_form() const {
    if (is_exact()) return exact();
    const Bracket& b = std::get<Bracket>(v_);
    return LinearForm::rational(b.basis, b.iv.hi);
  }

 private:
  struct Bracket {
    RationalInterval iv;
    BasisPtr basis;
  };
  std::variant<LinearForm, Bracket> v_;
};

}  // namespace approxcodec
