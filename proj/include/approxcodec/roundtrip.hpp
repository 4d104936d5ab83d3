#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "approxcodec/codec.hpp"

namespace approxcodec {

/// Deterministic 64-bit generator (splitmix64); identical streams on every
/// platform, which the byte-identical report contract requires.
struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, n) by rejection.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw InvalidInput("bounded(0)");
    std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t x = next();
      if (x < lim) return x % n;
    }
  }
};

struct RoundtripLimits {
  Index m_min = 1, m_max = 3;
  Index n_min = 1, n_max = 6;
  Index idx_max = 20;
};

struct TrialResult {
  std::uint64_t trial = 0;
  TupleSet input;
  bool ok = false;
  std::string error_code;
  std::string error_message;
  Index final_depth = 0;
  std::array<Rational, 3> bracket_widths{};
  std::uint64_t decoded_mismatch = 0;  // 1 when decode returned a different set
};

struct RoundtripReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t seed = 0;
  RoundtripLimits limits;
  std::vector<TrialResult> results;
  double elapsed_seconds = 0.0;  // reported on stderr, not in the JSON
};

inline TupleSet sample_tuple_set(SplitMix64& rng, const RoundtripLimits& lim) {
  TupleSet ts;
  ts.m = lim.m_min + rng.bounded(lim.m_max - lim.m_min + 1);
  Index n = lim.n_min + rng.bounded(lim.n_max - lim.n_min + 1);
  std::set<std::vector<Index>> seen;
  int attempts = 0;
  while (ts.tuples.size() < n) {
    if (++attempts > 10000) {
      throw InvalidInput("cannot sample enough distinct tuples within limits");
    }
    std::vector<Index> t(ts.m);
    for (auto& x : t) x = 1 + rng.bounded(lim.idx_max);
    if (seen.insert(t).second) ts.tuples.push_back(std::move(t));
  }
  return ts;
}

/// Seeded encode-decode trials, each fully isolated (fresh system instance,
/// per-trial derived seed). Errors are aggregated per trial, never aborting
/// the run.
inline RoundtripReport roundtrip(const SystemDescriptor& desc,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const RoundtripLimits& limits,
                                 const Caps& caps = {}, unsigned jobs = 1) {
  RoundtripReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.limits = limits;
  rep.results.resize(trials);

  auto run_trial = [&](std::uint64_t tr) {
    TrialResult& out = rep.results[tr];
    out.trial = tr;
    SplitMix64 rng(seed ^ (0xA5A5A5A5A5A5A5A5ull + tr * 0x9E3779B97F4A7C15ull));
    try {
      out.input = sample_tuple_set(rng, limits);
      SystemPtr sys = make_system(desc, caps);
      EncodedParameter p = encode(*sys, desc, out.input, caps);
      out.final_depth = p.final_depth;
      for (int i = 0; i < 3; ++i) out.bracket_widths[i] = p.brackets[i].width();
      TupleSet back = decode(*sys, p, std::nullopt, caps);
      if (back == out.input) {
        out.ok = true;
      } else {
        out.decoded_mismatch = 1;
        out.error_code = "roundtrip_mismatch";
        out.error_message = "decode returned a different tuple set";
      }
    } catch (const Error& e) {
      out.error_code = e.code();
      out.error_message = e.what();
    }
  };

  auto t0 = std::chrono::steady_clock::now();
  if (jobs <= 1 || trials <= 1) {
    for (std::uint64_t tr = 0; tr < trials; ++tr) run_trial(tr);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    unsigned nthreads = std::min<std::uint64_t>(jobs, trials);
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) {
      pool.emplace_back([&] {
        for (;;) {
          std::uint64_t tr = next.fetch_add(1);
          if (tr >= trials) return;
          run_trial(tr);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  for (const auto& r : rep.results) rep.successes += r.ok ? 1 : 0;
  return rep;
}

}  // namespace approxcodec
