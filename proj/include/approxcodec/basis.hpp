#pragma once

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "approxcodec/caps.hpp"
#include "approxcodec/errors.hpp"
#include "approxcodec/interval.hpp"
#include "approxcodec/rational.hpp"

namespace approxcodec {

enum class SymKind : std::uint8_t { Unit = 0, Sqrt = 1, Sine = 2, Pi = 3, Digits = 4 };

/// Canonical identity of a basis element. Sqrt keys carry the squarefree
/// radicand, Sine keys the integer argument, Digits keys an id into the
/// owning basis' stream registry. Pi has a single key; integer multiples
/// fold into coefficients.
struct SymbolKey {
  SymKind kind = SymKind::Unit;
  std::uint64_t arg = 0;

  friend auto operator<=>(const SymbolKey&, const SymbolKey&) = default;
};

/// A declared (pre-canonicalization) basis element.
struct SymbolSpec {
  SymKind kind = SymKind::Unit;
  Rational radicand;      // Sqrt: positive non-square rational
  std::uint64_t k = 0;    // Sine: sin(k); Pi: value k*pi
  std::string name;       // Digits
  std::string decimal;    // Digits: decimal expansion prefix, e.g. "1.4142"

  static SymbolSpec sqrt_of(Rational r) {
    SymbolSpec s;
    s.kind = SymKind::Sqrt;
    s.radicand = std::move(r);
    return s;
  }
  static SymbolSpec sine(std::uint64_t k) {
    SymbolSpec s;
    s.kind = SymKind::Sine;
    s.k = k;
    return s;
  }
  static SymbolSpec pi_multiple(std::uint64_t k) {
    SymbolSpec s;
    s.kind = SymKind::Pi;
    s.k = k;
    return s;
  }
  static SymbolSpec digits(std::string name, std::string decimal) {
    SymbolSpec s;
    s.kind = SymKind::Digits;
    s.name = std::move(name);
    s.decimal = std::move(decimal);
    return s;
  }
};

namespace detail {

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~MpfrValue() { mpfr_clear(x_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

inline Rational mpfr_to_rational(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return Rational(0);
  Integer z;
  mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x);
  Rational q(z);
  if (e >= 0) {
    Integer p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= Rational(p2);
  } else {
    Integer p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= Rational(p2);
  }
  return q;
}

/// sqrt(n) = s * sqrt(d) with d squarefree, by trial division.
inline void squarefree_split(const Integer& n, Integer& s, Integer& d) {
  s = 1;
  d = 1;
  Integer m = n;
  for (Integer p = 2; p * p <= m; ++p) {
    if (!mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) continue;
    unsigned e = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      m /= p;
      ++e;
    }
    for (unsigned i = 0; i + 1 < e; i += 2) s *= p;
    if (e % 2) d *= p;
  }
  if (m > 1) d *= m;  // leftover is prime
}

}  // namespace detail

/// Canonical form of a declared symbol: value = multiplier * <key symbol>.
struct CanonicalSymbol {
  Rational multiplier;
  SymbolKey key;
};

/// A fixed irrational basis: the rational unit plus declared irrational
/// symbols, each with a refinement procedure producing nested rational
/// enclosures. A basis may instead carry the full sine family (symbols
/// sin(1), sin(2), ... grown lazily as indices appear).
///
/// Linear independence over the rationals is what makes the coefficient-wise
/// zero test sound. It is guaranteed by construction for sqrt/sine/pi
/// combinations that admit a proof; every other combination (notably digit
/// streams, and pi mixed with sines) requires the explicit
/// asserted-independence flag.
class Basis {
 public:
  struct DigitStream {
    std::string name;
    std::string decimal;
  };

  static std::shared_ptr<const Basis> make(std::vector<SymbolSpec> specs,
                                           bool asserted_independent = false) {
    auto b = std::shared_ptr<Basis>(new Basis());
    for (auto& s : specs) b->declare(s);
    b->finalize(asserted_independent);
    return b;
  }

  /// Basis {1} u {sin(k) : k >= 1}, grown lazily.
  static std::shared_ptr<const Basis> sine_family(std::uint64_t hint = 0) {
    auto b = std::shared_ptr<Basis>(new Basis());
    b->sine_family_ = true;
    b->sine_hint_ = hint;
    b->finalize(false);
    return b;
  }

  /// Rationals-only basis (the field system's scalar domain).
  static std::shared_ptr<const Basis> rational_only() {
    auto b = std::shared_ptr<Basis>(new Basis());
    b->finalize(false);
    return b;
  }

  bool sine_family_enabled() const { return sine_family_; }
  std::uint64_t sine_hint() const { return sine_hint_; }
  bool asserted_independent() const { return asserted_; }
  bool independence_guaranteed() const { return guaranteed_; }

  const std::vector<CanonicalSymbol>& declared() const { return declared_; }
  const std::vector<DigitStream>& digit_streams() const { return streams_; }

  bool allows(const SymbolKey& k) const {
    if (k.kind == SymKind::Unit) return true;
    if (sine_family_ && k.kind == SymKind::Sine && k.arg >= 1) return true;
    return std::any_of(declared_.begin(), declared_.end(),
                       [&](const CanonicalSymbol& c) { return c.key == k; });
  }

  /// Nested rational enclosure of the symbol value, width <= 2^-p.
  RationalInterval refine_symbol(const SymbolKey& key, std::uint64_t p,
                                 std::uint64_t precision_cap) const {
    if (key.kind == SymKind::Unit) return {Rational(1), Rational(1)};
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.bits >= p) return it->second.iv;
    if (p > precision_cap) {
      throw PrecisionCapExceeded("symbol refinement beyond precision cap (" +
                                 std::to_string(precision_cap) + " bits)");
    }
    const Rational need = pow2(-static_cast<long>(p));
    RationalInterval fresh = compute_enclosure(key, p);
    for (std::uint64_t extra = 64; fresh.width() > need; extra *= 2) {
      // mpfr precision does not map 1:1 onto interval width for values
      // above 1; widen until the contract holds
      fresh = compute_enclosure(key, p + extra);
    }
    if (it != cache_.end()) {
      fresh = intersect(fresh, it->second.iv);  // nesting by construction
      it->second = {fresh, p};
    } else {
      cache_.emplace(key, Cached{fresh, p});
    }
    return fresh;
  }

  /// Outward double bounds, from a one-time 64-bit refinement.
  DoubleIv symbol_double(const SymbolKey& key) const {
    if (key.kind == SymKind::Unit) return {1.0, 1.0};
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = dcache_.find(key);
      if (it != dcache_.end()) return it->second;
    }
    RationalInterval iv = refine_symbol(key, 64, UINT64_MAX);
    DoubleIv lo = to_double_iv(iv.lo), hi = to_double_iv(iv.hi);
    DoubleIv d{lo.lo, hi.hi};
    std::lock_guard<std::mutex> lk(mu_);
    dcache_.emplace(key, d);
    return d;
  }

  std::string key_name(const SymbolKey& k) const {
    switch (k.kind) {
      case SymKind::Unit:
        return "1";
      case SymKind::Sqrt:
        return "sqrt:" + std::to_string(k.arg);
      case SymKind::Sine:
        return "sin:" + std::to_string(k.arg);
      case SymKind::Pi:
        return "pi:1";
      case SymKind::Digits:
        return "digits:" + streams_.at(k.arg).name;
    }
    return "?";
  }

  SymbolKey key_from_name(const std::string& name) const {
    if (name == "1") return SymbolKey{};
    auto colon = name.find(':');
    if (colon == std::string::npos) throw ParseError("bad symbol name: " + name);
    std::string head = name.substr(0, colon), tail = name.substr(colon + 1);
    if (head == "sqrt") return {SymKind::Sqrt, std::stoull(tail)};
    if (head == "sin") return {SymKind::Sine, std::stoull(tail)};
    if (head == "pi") return {SymKind::Pi, 0};
    if (head == "digits") {
      for (std::size_t i = 0; i < streams_.size(); ++i) {
        if (streams_[i].name == tail) return {SymKind::Digits, i};
      }
      throw ParseError("unknown digit stream: " + tail);
    }
    throw ParseError("bad symbol name: " + name);
  }

  /// Canonicalizes a spec against this basis (registering nothing); the
  /// returned multiplier absorbs square factors and pi multiples.
  static CanonicalSymbol canonicalize(const SymbolSpec& spec,
                                      const std::vector<DigitStream>& streams) {
    switch (spec.kind) {
      case SymKind::Unit:
        return {Rational(1), SymbolKey{}};
      case SymKind::Sqrt: {
        if (spec.radicand <= 0) throw InvalidInput("sqrt radicand must be positive");
        // sqrt(p/q) = sqrt(p*q)/q = (s/q) * sqrt(d), d squarefree
        Integer pq = spec.radicand.get_num() * spec.radicand.get_den();
        Integer s, d;
        detail::squarefree_split(pq, s, d);
        if (d == 1) throw InvalidInput("sqrt radicand is a perfect square");
        Rational mult = Rational(s) / Rational(spec.radicand.get_den());
        return {mult, SymbolKey{SymKind::Sqrt, d.get_ui()}};
      }
      case SymKind::Sine:
        if (spec.k < 1) throw InvalidInput("sin argument must be >= 1");
        return {Rational(1), SymbolKey{SymKind::Sine, spec.k}};
      case SymKind::Pi:
        if (spec.k < 1) throw InvalidInput("pi multiple must be >= 1");
        return {Rational(static_cast<unsigned long>(spec.k)),
                SymbolKey{SymKind::Pi, 0}};
      case SymKind::Digits: {
        for (std::size_t i = 0; i < streams.size(); ++i) {
          if (streams[i].name == spec.name)
            return {Rational(1), SymbolKey{SymKind::Digits, i}};
        }
        throw InvalidInput("digit stream not registered: " + spec.name);
      }
    }
    throw InvalidInput("unknown symbol kind");
  }

 private:
  struct Cached {
    RationalInterval iv;
    std::uint64_t bits;
  };

  Basis() = default;

  void declare(const SymbolSpec& spec) {
    if (spec.kind == SymKind::Unit) return;  // position 0 is implicit
    if (spec.kind == SymKind::Digits) {
      if (spec.name.empty()) throw InvalidInput("digit stream needs a name");
      streams_.push_back({spec.name, spec.decimal});
    }
    CanonicalSymbol c = canonicalize(spec, streams_);
    for (const auto& prev : declared_) {
      if (prev.key == c.key) {
        throw InvalidInput("basis symbols must be pairwise distinct "
                           "(canonical collision on " + key_name(c.key) + ")");
      }
    }
    declared_.push_back(std::move(c));
  }

  void finalize(bool asserted) {
    bool has_digits = false, has_pi = false, has_sine = sine_family_;
    for (const auto& c : declared_) {
      has_digits |= c.key.kind == SymKind::Digits;
      has_pi |= c.key.kind == SymKind::Pi;
      has_sine |= c.key.kind == SymKind::Sine;
    }
    guaranteed_ = !has_digits && !(has_pi && has_sine);
    asserted_ = asserted;
    if (!guaranteed_ && !asserted) {
      throw InvalidInput(
          "independence of this basis is not guaranteed by construction; "
          "an explicit asserted-independence flag is required");
    }
    if (guaranteed_ && asserted) {
      throw InvalidInput(
          "independence is guaranteed by construction; "
          "do not assert it explicitly");
    }
  }

  RationalInterval compute_enclosure(const SymbolKey& key,
                                     std::uint64_t p) const {
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(p + 16);
    switch (key.kind) {
      case SymKind::Sqrt: {
        detail::MpfrValue lo(prec), hi(prec);
        mpfr_sqrt_ui(lo.get(), static_cast<unsigned long>(key.arg), MPFR_RNDD);
        mpfr_sqrt_ui(hi.get(), static_cast<unsigned long>(key.arg), MPFR_RNDU);
        return {detail::mpfr_to_rational(lo.get()),
                detail::mpfr_to_rational(hi.get())};
      }
      case SymKind::Sine: {
        detail::MpfrValue arg(64), lo(prec), hi(prec);
        mpfr_set_ui(arg.get(), static_cast<unsigned long>(key.arg), MPFR_RNDN);
        mpfr_sin(lo.get(), arg.get(), MPFR_RNDD);
        mpfr_sin(hi.get(), arg.get(), MPFR_RNDU);
        return {detail::mpfr_to_rational(lo.get()),
                detail::mpfr_to_rational(hi.get())};
      }
      case SymKind::Pi: {
        detail::MpfrValue lo(prec), hi(prec);
        mpfr_const_pi(lo.get(), MPFR_RNDD);
        mpfr_const_pi(hi.get(), MPFR_RNDU);
        return {detail::mpfr_to_rational(lo.get()),
                detail::mpfr_to_rational(hi.get())};
      }
      case SymKind::Digits:
        return digits_enclosure(streams_.at(key.arg), p);
      case SymKind::Unit:
        break;
    }
    return {Rational(1), Rational(1)};
  }

  /// The stream's decimal text is the truncated expansion of the value:
  /// prefix <= value <= prefix + 10^-(fraction digits).
  static RationalInterval digits_enclosure(const DigitStream& ds,
                                           std::uint64_t p) {
    const std::string& s = ds.decimal;
    bool neg = !s.empty() && s[0] == '-';
    std::string body = neg ? s.substr(1) : s;
    auto dot = body.find('.');
    std::string ip = dot == std::string::npos ? body : body.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : body.substr(dot + 1);
    if (ip.empty() || ip.find_first_not_of("0123456789") != std::string::npos ||
        fp.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad digit stream literal for '" + ds.name + "'");
    }
    Integer scaled(ip + fp, 10);  // explicit base: leading zeros are not octal
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    Rational v = Rational(scaled) / Rational(den);
    Rational ulp = Rational(1) / Rational(den);
    RationalInterval iv = neg ? RationalInterval(-v - ulp, -v)
                              : RationalInterval(v, v + ulp);
    // width = 10^-len must reach 2^-p
    const Rational need = pow2(-static_cast<long>(p));
    if (iv.width() > need) {
      throw PrecisionCapExceeded(
          "digit stream '" + ds.name + "' has too few digits for 2^-" +
          std::to_string(p) + " refinement");
    }
    return iv;
  }

  std::vector<CanonicalSymbol> declared_;
  std::vector<DigitStream> streams_;
  bool sine_family_ = false;
  std::uint64_t sine_hint_ = 0;
  bool guaranteed_ = true;
  bool asserted_ = false;

  mutable std::mutex mu_;
  mutable std::map<SymbolKey, Cached> cache_;
  mutable std::map<SymbolKey, DoubleIv> dcache_;
};

using BasisPtr = std::shared_ptr<const Basis>;

}  // namespace approxcodec
