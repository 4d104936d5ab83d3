#pragma once

#include <memory>
#include <string>
#include <vector>

#include "approxcodec/field.hpp"
#include "approxcodec/kronecker.hpp"
#include "approxcodec/sine.hpp"

namespace approxcodec {

/// Serializable description of an approximation system; round-trips through
/// JSON losslessly.
struct SystemDescriptor {
  enum class Kind { kronecker, sine, field };
  Kind kind = Kind::kronecker;

  // kronecker
  SymbolSpec alpha;
  SymbolSpec beta;
  bool asserted_independent = false;

  // sine
  std::uint64_t max_index_hint = 0;

  // field
  std::vector<Rational> f_table;

  static SystemDescriptor kronecker_sqrt(std::uint64_t ra, std::uint64_t rb) {
    SystemDescriptor d;
    d.kind = Kind::kronecker;
    d.alpha = SymbolSpec::sqrt_of(Rational(static_cast<unsigned long>(ra)));
    d.beta = SymbolSpec::sqrt_of(Rational(static_cast<unsigned long>(rb)));
    return d;
  }
  static SystemDescriptor sine(std::uint64_t hint) {
    SystemDescriptor d;
    d.kind = Kind::sine;
    d.max_index_hint = hint;
    return d;
  }
  static SystemDescriptor field(std::vector<Rational> table) {
    SystemDescriptor d;
    d.kind = Kind::field;
    d.f_table = std::move(table);
    return d;
  }
};

inline SystemPtr make_system(const SystemDescriptor& d, const Caps& caps = {}) {
  switch (d.kind) {
    case SystemDescriptor::Kind::kronecker:
      return std::make_shared<KroneckerSystem>(d.alpha, d.beta,
                                               d.asserted_independent, caps);
    case SystemDescriptor::Kind::sine:
      return std::make_shared<SineSystem>(d.max_index_hint);
    case SystemDescriptor::Kind::field:
      return std::make_shared<FieldSystem>(d.f_table);
  }
  throw InvalidInput("unknown system kind");
}

}  // namespace approxcodec
