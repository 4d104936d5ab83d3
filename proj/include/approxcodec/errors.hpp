#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace approxcodec {

/// Base of the library's error taxonomy. Every error carries a stable
/// machine-readable code alongside the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct BasisMismatch : Error {
  explicit BasisMismatch(const std::string& m) : Error("basis_mismatch", m) {}
};

struct PrecisionCapExceeded : Error {
  explicit PrecisionCapExceeded(const std::string& m)
      : Error("precision_cap_exceeded", m) {}
};

struct SearchCapExceeded : Error {
  explicit SearchCapExceeded(const std::string& m)
      : Error("search_cap_exceeded", m) {}
};

struct WorkBudgetExceeded : Error {
  explicit WorkBudgetExceeded(const std::string& m)
      : Error("work_budget_exceeded", m) {}
};

struct DepthExhausted : Error {
  explicit DepthExhausted(const std::string& m) : Error("depth_exhausted", m) {}
};

struct EmptyWitness : Error {
  explicit EmptyWitness(const std::string& m) : Error("empty_witness", m) {}
};

struct EmptyGap : Error {
  explicit EmptyGap(const std::string& m) : Error("empty_gap", m) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& m) : Error("invalid_input", m) {}
};

struct InvalidChain : Error {
  explicit InvalidChain(const std::string& m) : Error("invalid_chain", m) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("parse_error", m) {}
};

struct DuplicateTuple : Error {
  explicit DuplicateTuple(const std::string& m)
      : Error("duplicate_tuple", m) {}
};

/// A construction-time invariant failed. Indicates a bug, never user input.
struct InternalInvariant : Error {
  explicit InternalInvariant(const std::string& m)
      : Error("internal_invariant", m) {}
};

}  // namespace approxcodec
