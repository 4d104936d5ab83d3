#pragma once

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "approxcodec/system.hpp"

namespace approxcodec {

/// The Theorem-C style system over a basis {1, alpha, beta} with
/// 1 < alpha < beta: U = (0, beta), D = N, f(n) = n - floor_beta(n), and g
/// built from the f_alpha first-entry searches h1/h2.
class KroneckerSystem : public ApproximationSystem {
 public:
  KroneckerSystem(const SymbolSpec& alpha, const SymbolSpec& beta,
                  bool asserted_independent = false, const Caps& caps = {}) {
    basis_ = Basis::make({alpha, beta}, asserted_independent);
    const auto& decl = basis_->declared();
    alpha_ = LinearForm::symbol(basis_, decl[0].key, decl[0].multiplier);
    beta_ = LinearForm::symbol(basis_, decl[1].key, decl[1].multiplier);
    LinearForm one = LinearForm::rational(basis_, 1);
    if (!(sign_of(alpha_ - one, caps) > 0 && sign_of(beta_ - alpha_, caps) > 0)) {
      throw InvalidInput("kronecker system requires 1 < alpha < beta");
    }
    ad_ = alpha_.double_iv();
    bd_ = beta_.double_iv();
    // f(n) = n - k*beta is rational exactly when k = 0, i.e. n < beta
    for (Index n = 1; sign_of(LinearForm::rational(basis_, Rational(
                                  static_cast<unsigned long>(n))) - beta_,
                              caps) < 0;
         ++n) {
      rational_values_.push_back(Rational(static_cast<unsigned long>(n)));
    }
  }

  std::string kind() const override { return "kronecker"; }
  BasisPtr basis() const override { return basis_; }
  LinearForm u_lo() const override { return LinearForm::zero(basis_); }
  LinearForm u_hi() const override { return beta_; }
  const std::vector<Rational>& rational_f_values() const override {
    return rational_values_;
  }
  const LinearForm& alpha() const { return alpha_; }
  const LinearForm& beta() const { return beta_; }

  /// f(n) = n - floor_beta(n), in (0, beta).
  LinearForm f(Index n) const override {
    require_index(n);
    std::uint64_t k = floor_count(f_cache_, n, false);
    return LinearForm::rational(basis_, Rational(static_cast<unsigned long>(n))) -
           beta_.scaled(Rational(static_cast<unsigned long>(k)));
  }

  /// f_alpha(n*alpha) = n*alpha - floor_beta(n*alpha), in (0, beta).
  LinearForm f_alpha(Index n) const {
    require_index(n);
    std::uint64_t k = floor_count(fa_cache_, n, true);
    return alpha_.scaled(Rational(static_cast<unsigned long>(n))) -
           beta_.scaled(Rational(static_cast<unsigned long>(k)));
  }

  DoubleIv f_iv(Index n) const override {
    std::uint64_t k = floor_count(f_cache_, n, false);
    double lo = static_cast<double>(n) - static_cast<double>(k) * bd_.hi;
    double hi = static_cast<double>(n) - static_cast<double>(k) * bd_.lo;
    return pad(lo, hi);
  }

  DoubleIv f_alpha_iv(Index n) const {
    std::uint64_t k = floor_count(fa_cache_, n, true);
    double lo = static_cast<double>(n) * ad_.lo - static_cast<double>(k) * bd_.hi;
    double hi = static_cast<double>(n) * ad_.hi - static_cast<double>(k) * bd_.lo;
    return pad(lo, hi);
  }

  std::vector<LinearForm> g_candidates(const LinearForm& a, const LinearForm& b,
                                       Index d, const Caps& caps,
                                       WorkMeter& meter) const override {
    struct AlphaSeq : detail::ScanSeq {
      const KroneckerSystem* s;
      DoubleIv approx(Index n) const override { return s->f_alpha_iv(n); }
      LinearForm exact(Index n) const override { return s->f_alpha(n); }
    };
    AlphaSeq seq;
    seq.s = this;
    auto h = detail::batched_first_entry(*this, b - a, d, seq, caps, meter);
    std::vector<LinearForm> v;
    v.reserve(d);
    for (Index e = 1; e <= d; ++e) v.push_back(a + h[e - 1].second);
    return v;
  }

 private:
  struct FloorCache {
    mutable std::mutex mu;
    mutable std::vector<std::uint64_t> k;  // k[n-1] for index n
  };

  static DoubleIv pad(double lo, double hi) {
    return {std::nextafter(std::nextafter(lo, -1e300), -1e300),
            std::nextafter(std::nextafter(hi, 1e300), 1e300)};
  }

  /// Count of beta-multiples strictly below n (or n*alpha). Monotone with
  /// unit increments because beta > max(1, alpha).
  std::uint64_t floor_count(const FloorCache& c, Index n, bool alpha_seq) const {
    std::lock_guard<std::mutex> lk(c.mu);
    if (c.k.size() >= n) return c.k[n - 1];
    std::uint64_t k = c.k.empty() ? 0 : c.k.back();
    for (Index m = c.k.size() + 1; m <= n; ++m) {
      while (multiple_below(m, k + 1, alpha_seq)) ++k;
      c.k.push_back(k);
    }
    return c.k[n - 1];
  }

  /// Is (k)*beta < m (value) resp. < m*alpha? Double filter, exact fallback.
  bool multiple_below(Index m, std::uint64_t k, bool alpha_seq) const {
    double kb_lo = static_cast<double>(k) * bd_.lo;
    double kb_hi = static_cast<double>(k) * bd_.hi;
    double v_lo = alpha_seq ? static_cast<double>(m) * ad_.lo
                            : static_cast<double>(m);
    double v_hi = alpha_seq ? static_cast<double>(m) * ad_.hi
                            : static_cast<double>(m);
    // generous slack for the products' rounding
    if (kb_hi + 1e-9 < v_lo) return true;
    if (kb_lo - 1e-9 > v_hi) return false;
    LinearForm value =
        alpha_seq
            ? alpha_.scaled(Rational(static_cast<unsigned long>(m)))
            : LinearForm::rational(basis_, Rational(static_cast<unsigned long>(m)));
    return sign_of(value - beta_.scaled(Rational(static_cast<unsigned long>(k)))) > 0;
  }

  BasisPtr basis_;
  LinearForm alpha_, beta_;
  DoubleIv ad_, bd_;
  std::vector<Rational> rational_values_;
  FloorCache f_cache_, fa_cache_;
};

/// Spec-facing operations (reference implementations; g_candidates batches
/// the same searches).
inline LinearForm kron_f(const KroneckerSystem& s, Index n) { return s.f(n); }
inline LinearForm kron_f_alpha(const KroneckerSystem& s, Index n) {
  return s.f_alpha(n);
}

/// h1(u, d, e): smallest n with f_alpha(n*alpha) in (f(e), f(e)+u) and no
/// f(y), y <= d, in (f(e), f_alpha(n*alpha)]. Linear scan under the search
/// cap; termination for genuine inputs is Kronecker's theorem.
inline Index kron_h1(const KroneckerSystem& s, const LinearForm& u, Index d,
                     Index e, const Caps& caps = {}) {
  if (e < 1 || e > d) throw InvalidInput("h1: need 1 <= e <= d");
  if (sign_of(u, caps) <= 0) throw InvalidInput("h1: u must be positive");
  LinearForm fe = s.f(e);
  LinearForm top = fe + u;
  for (Index n = 1; n <= caps.search_cap; ++n) {
    LinearForm x = s.f_alpha(n);
    if (sign_of(x - fe, caps) <= 0 || sign_of(x - top, caps) >= 0) continue;
    bool blocked = false;
    for (Index y = 1; y <= d; ++y) {
      if (s.compare_f_form(y, fe, caps) > 0 && s.compare_f_form(y, x, caps) <= 0) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return n;
  }
  throw SearchCapExceeded("h1 found no admissible alpha-multiple under the cap");
}

inline LinearForm kron_h2(const KroneckerSystem& s, const LinearForm& u, Index d,
                          Index e, const Caps& caps = {}) {
  return s.f_alpha(kron_h1(s, u, d, e, caps)) - s.f(e);
}

inline Index kron_g(const KroneckerSystem& s, const ParamReal& c,
                    const LinearForm& a, const LinearForm& b, Index d,
                    const Caps& caps = {}) {
  WorkMeter meter(caps.work_budget);
  return s.g(c, a, b, d, caps, meter);
}

}  // namespace approxcodec
