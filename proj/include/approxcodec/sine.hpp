#pragma once

#include <cmath>
#include <mutex>
#include <vector>

#include "approxcodec/system.hpp"

namespace approxcodec {

/// The Theorem-D style system: U = (-1, 1), D = N, f(n) = sin(n) over the
/// lazily grown basis {1, sin(1), sin(2), ...}. The coefficient-wise zero
/// test is sound by the Lindemann-Weierstrass theorem.
class SineSystem : public ApproximationSystem {
 public:
  explicit SineSystem(std::uint64_t max_index_hint = 0)
      : basis_(Basis::sine_family(max_index_hint)) {}

  std::string kind() const override { return "sine"; }
  BasisPtr basis() const override { return basis_; }
  LinearForm u_lo() const override { return LinearForm::rational(basis_, -1); }
  LinearForm u_hi() const override { return LinearForm::rational(basis_, 1); }

  LinearForm f(Index n) const override {
    require_index(n);
    return LinearForm::symbol(basis_, SymbolKey{SymKind::Sine, n});
  }

  DoubleIv f_iv(Index n) const override {
    std::lock_guard<std::mutex> lk(mu_);
    for (Index m = iv_cache_.size() + 1; m <= n; ++m) {
      // libm sin of the exact integer argument, padded well beyond its
      // worst-case error; near-ties fall back to exact enclosures anyway
      double v = std::sin(static_cast<double>(m));
      iv_cache_.push_back({v - 1e-12, v + 1e-12});
    }
    return iv_cache_[n - 1];
  }

  std::vector<LinearForm> g_candidates(const LinearForm& a, const LinearForm& b,
                                       Index d, const Caps& caps,
                                       WorkMeter& meter) const override {
    struct SelfSeq : detail::ScanSeq {
      const SineSystem* s;
      DoubleIv approx(Index n) const override { return s->f_iv(n); }
      LinearForm exact(Index n) const override { return s->f(n); }
    };
    SelfSeq seq;
    seq.s = this;
    auto h = detail::batched_first_entry(*this, b - a, d, seq, caps, meter);
    std::vector<LinearForm> v;
    v.reserve(d);
    for (Index e = 1; e <= d; ++e) v.push_back(a + h[e - 1].second);
    return v;
  }

 private:
  BasisPtr basis_;
  mutable std::mutex mu_;
  mutable std::vector<DoubleIv> iv_cache_;
};

inline LinearForm sine_f(const SineSystem& s, Index n) { return s.f(n); }

/// h1(u, d, e): smallest x in N with sin(x) in (sin(e), sin(e)+u) and
/// sin(N<=d) disjoint from (sin(e), sin(x)].
inline Index sine_h1(const SineSystem& s, const LinearForm& u, Index d, Index e,
                     const Caps& caps = {}) {
  if (e < 1 || e > d) throw InvalidInput("h1: need 1 <= e <= d");
  if (sign_of(u, caps) <= 0) throw InvalidInput("h1: u must be positive");
  LinearForm fe = s.f(e);
  LinearForm top = fe + u;
  for (Index n = 1; n <= caps.search_cap; ++n) {
    if (n == e) continue;
    LinearForm x = s.f(n);
    if (sign_of(x - fe, caps) <= 0 || sign_of(x - top, caps) >= 0) continue;
    bool blocked = false;
    for (Index y = 1; y <= d; ++y) {
      if (s.compare_ff(y, e, caps) > 0 && s.compare_ff(y, n, caps) <= 0) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return n;
  }
  throw SearchCapExceeded("sine h1 found no admissible index under the cap");
}

inline LinearForm sine_h2(const SineSystem& s, const LinearForm& u, Index d,
                          Index e, const Caps& caps = {}) {
  return s.f(sine_h1(s, u, d, e, caps)) - s.f(e);
}

inline Index sine_g(const SineSystem& s, const ParamReal& c, const LinearForm& a,
                    const LinearForm& b, Index d, const Caps& caps = {}) {
  WorkMeter meter(caps.work_budget);
  return s.g(c, a, b, d, caps, meter);
}

}  // namespace approxcodec
