#pragma once

#include <cstdint>
#include <string>

#include "approxcodec/errors.hpp"

namespace approxcodec {

/// Resource limits threaded through every search and refinement loop.
///
/// search_cap bounds each individual index scan; work_budget bounds the sum
/// of all scan steps inside one encode/decode/g call, so a call whose scans
/// individually stay under the cap still terminates in bounded time.
struct Caps {
  std::uint64_t search_cap = 1'000'000;
  std::uint64_t precision_cap_bits = 65'536;  // 2^16
  std::uint64_t depth_cap = 1'000'000;
  std::uint64_t work_budget = 50'000'000;

  void validate() const {
    if (search_cap == 0 || precision_cap_bits == 0 || depth_cap == 0 ||
        work_budget == 0) {
      throw InvalidInput("caps must be positive");
    }
  }
};

/// Per-call step counter charged by every inner loop iteration.
class WorkMeter {
 public:
  WorkMeter() : budget_(UINT64_MAX) {}
  explicit WorkMeter(std::uint64_t budget) : budget_(budget) {}

  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > budget_) {
      throw WorkBudgetExceeded("work budget of " + std::to_string(budget_) +
                               " steps exhausted");
    }
  }
  std::uint64_t used() const noexcept { return used_; }

 private:
  std::uint64_t used_ = 0;
  std::uint64_t budget_;
};

}  // namespace approxcodec
