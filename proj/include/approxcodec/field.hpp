#pragma once

#include <memory>
#include <vector>

#include "approxcodec/system.hpp"

namespace approxcodec {

/// The Theorem-E style system: U = (0, 1), D indexed into a finite table of
/// rationals in (0, 1), and g built from h(a, b, e) = a + f(e)*(b - a).
/// Keeping the table, a and b rational keeps every product inside the linear
/// scalar domain without general real multiplication.
class FieldSystem : public ApproximationSystem {
 public:
  explicit FieldSystem(std::vector<Rational> table)
      : basis_(Basis::rational_only()), table_(std::move(table)) {
    if (table_.empty()) throw InvalidInput("field system needs a nonempty f-table");
    for (auto& q : table_) {
      q.canonicalize();  // callers may hand over raw p/q pairs
      if (!(q > 0 && q < 1)) {
        throw InvalidInput("field f-table entries must lie in (0, 1)");
      }
    }
  }

  std::string kind() const override { return "field"; }
  BasisPtr basis() const override { return basis_; }
  LinearForm u_lo() const override { return LinearForm::zero(basis_); }
  LinearForm u_hi() const override { return LinearForm::rational(basis_, 1); }
  Index max_index() const override { return table_.size(); }
  const std::vector<Rational>& rational_f_values() const override {
    return table_;
  }

  const std::vector<Rational>& table() const { return table_; }

  LinearForm f(Index n) const override {
    require_index(n);
    return LinearForm::rational(basis_, table_[n - 1]);
  }

  DoubleIv f_iv(Index n) const override {
    require_index(n);
    return to_double_iv(table_[n - 1]);
  }

  bool injective() const {
    for (std::size_t i = 0; i < table_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (table_[i] == table_[j]) return false;
      }
    }
    return true;
  }

  std::vector<LinearForm> g_candidates(const LinearForm& a, const LinearForm& b,
                                       Index d, const Caps& caps,
                                       WorkMeter& meter) const override {
    (void)caps;
    if (!a.is_rational() || !b.is_rational()) {
      throw InvalidInput("field system: a and b must be exact rationals");
    }
    if (d > table_.size()) {
      throw DepthExhausted("field g: d exceeds the f-table size");
    }
    meter.tick(d);
    Rational ra = a.rational_value(), rb = b.rational_value();
    Rational w = rb - ra;
    std::vector<LinearForm> v;
    v.reserve(d);
    for (Index e = 1; e <= d; ++e) {
      v.push_back(LinearForm::rational(basis_, ra + table_[e - 1] * w));
    }
    return v;
  }

 private:
  BasisPtr basis_;
  std::vector<Rational> table_;
};

/// h(a, b, e) = a + f(e)*(b - a) for a < b, and a otherwise.
inline LinearForm field_h(const FieldSystem& s, const LinearForm& a,
                          const LinearForm& b, Index e, const Caps& caps = {}) {
  if (sign_of(b - a, caps) <= 0) return a;
  if (!a.is_rational() || !b.is_rational()) {
    throw InvalidInput("field system: a and b must be exact rationals");
  }
  Rational fe = s.table().at(e - 1);
  return LinearForm::rational(
      s.basis(), a.rational_value() + fe * (b.rational_value() - a.rational_value()));
}

inline Index field_g(const FieldSystem& s, const ParamReal& c, const LinearForm& a,
                     const LinearForm& b, Index d, const Caps& caps = {}) {
  WorkMeter meter(caps.work_budget);
  return s.g(c, a, b, d, caps, meter);
}

/// Restricts the domain to the first occurrence of every f-value, re-indexed
/// in order, so that f becomes injective. Systems whose f is injective by
/// construction pass through unchanged.
inline SystemPtr dedupe_domain(const SystemPtr& sys) {
  auto field = std::dynamic_pointer_cast<const FieldSystem>(sys);
  if (!field) return sys;  // kronecker/sine f-values have distinct coefficient vectors
  if (field->injective()) return sys;
  std::vector<Rational> seen;
  for (const auto& q : field->table()) {
    bool dup = false;
    for (const auto& p : seen) {
      if (p == q) {
        dup = true;
        break;
      }
    }
    if (!dup) seen.push_back(q);
  }
  return std::make_shared<FieldSystem>(std::move(seen));
}

/// Index view of dedupe: which original indices survive.
inline std::vector<Index> dedupe_kept_indices(const std::vector<Rational>& table) {
  std::vector<Index> keep;
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (table[j] == table[i]) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(static_cast<Index>(i + 1));
  }
  return keep;
}

}  // namespace approxcodec
