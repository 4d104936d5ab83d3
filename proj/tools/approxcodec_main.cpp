// Command-line front door: encode / decode / explore / roundtrip over a
// configured approximation system, JSON-lines on stdout, files only when a
// path flag is given. Exit codes: 0 success, 1 property failure, 2 usage or
// parse error, 3 cap exceeded.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "approxcodec/approxcodec.hpp"

namespace ac = approxcodec;
using ac::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapExceeded = 3;

int exit_code_for(const ac::Error& e) {
  const std::string& c = e.code();
  if (c == "parse_error" || c == "duplicate_tuple" || c == "invalid_input" ||
      c == "basis_mismatch" || c == "invalid_chain") {
    return kExitUsage;
  }
  if (c == "search_cap_exceeded" || c == "precision_cap_exceeded" ||
      c == "work_budget_exceeded" || c == "depth_exhausted") {
    return kExitCapExceeded;
  }
  return kExitPropertyFailure;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ac::ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ac::ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ac::ParseError("cannot open output file: " + path);
  out << text << "\n";
}

struct GlobalOpts {
  std::string system_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> depth_cap;
  std::optional<std::uint64_t> search_cap;
  std::optional<std::uint64_t> precision_cap;
  std::optional<std::uint64_t> work_cap;

  ac::RunConfig resolve() const {
    ac::RunConfig rc;
    if (const char* env = std::getenv("APPROX_CODEC_CONFIG")) {
      rc = ac::runconfig_from_json(read_json_file(env));
    }
    if (!system_path.empty()) {
      rc.system = ac::descriptor_from_json(read_json_file(system_path));
    }
    if (seed) rc.seed = *seed;
    if (depth_cap) rc.caps.depth_cap = *depth_cap;
    if (search_cap) rc.caps.search_cap = *search_cap;
    if (precision_cap) rc.caps.precision_cap_bits = *precision_cap;
    if (work_cap) rc.caps.work_budget = *work_cap;
    if (!out_path.empty()) rc.out_path = out_path;
    rc.caps.validate();
    return rc;
  }
};

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump() << "\n";
  } else {
    write_text_file(out_path, j.dump(2));
  }
}

ac::Rational parse_rat_arg(const std::string& s) { return ac::parse_rational(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact best-approximation codec"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--system", g.system_path, "system descriptor JSON file");
  app.add_option("--seed", g.seed, "64-bit seed");
  app.add_option("--depth-cap", g.depth_cap, "depth cap");
  app.add_option("--search-cap", g.search_cap, "per-scan search cap");
  app.add_option("--precision-cap", g.precision_cap, "precision cap in bits");
  app.add_option("--work-cap", g.work_cap, "per-call work budget");
  app.add_option("--out", g.out_path, "output file path");

  // encode
  auto* cmd_encode = app.add_subcommand("encode", "encode a tuple set file");
  std::string encode_in;
  cmd_encode->add_option("--in", encode_in, "TupleSet JSON file")->required();

  // decode
  auto* cmd_decode = app.add_subcommand("decode", "decode a parameter file");
  std::string decode_in;
  std::optional<std::uint64_t> decode_count;
  cmd_decode->add_option("--in", decode_in, "EncodedParameter JSON file")->required();
  cmd_decode->add_option("--count", decode_count, "number of tuples to emit");

  // explore
  auto* cmd_explore = app.add_subcommand("explore", "inspect engine/system operations");
  cmd_explore->require_subcommand(1);
  auto* ex_best = cmd_explore->add_subcommand("best-approx", "best approximations of c");
  std::string ex_c;
  std::uint64_t ex_depth = 0;
  ex_best->add_option("--c", ex_c, "parameter as a rational p/q")->required();
  ex_best->add_option("--depth", ex_depth, "depth bound")->required();
  auto* ex_split = cmd_explore->add_subcommand("split", "smallest d2 splitting past d1");
  std::uint64_t ex_d1 = 0;
  ex_split->add_option("--d1", ex_d1)->required();
  auto* ex_cond = cmd_explore->add_subcommand("condition-ii", "constancy witness for g");
  std::string ex_a, ex_b;
  std::uint64_t ex_d = 0, ex_e = 0;
  ex_cond->add_option("--a", ex_a, "left endpoint p/q")->required();
  ex_cond->add_option("--b", ex_b, "right endpoint p/q")->required();
  ex_cond->add_option("--d", ex_d)->required();
  ex_cond->add_option("--e", ex_e)->required();
  auto* ex_gaps = cmd_explore->add_subcommand("gaps", "distinct gap lengths of sorted f(1..N)");
  std::uint64_t ex_n = 0;
  ex_gaps->add_option("--n", ex_n)->required();

  // roundtrip
  auto* cmd_rt = app.add_subcommand("roundtrip", "seeded encode/decode trials");
  std::uint64_t rt_trials = 0;
  ac::RoundtripLimits rt_lim;
  unsigned rt_jobs = 1;
  cmd_rt->add_option("--trials", rt_trials)->required();
  cmd_rt->add_option("--m-min", rt_lim.m_min);
  cmd_rt->add_option("--m-max", rt_lim.m_max);
  cmd_rt->add_option("--n-min", rt_lim.n_min);
  cmd_rt->add_option("--n-max", rt_lim.n_max);
  cmd_rt->add_option("--idx-max", rt_lim.idx_max);
  cmd_rt->add_option("--jobs", rt_jobs, "parallel trial workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    ac::RunConfig rc = g.resolve();
    ac::SystemPtr sys = ac::make_system(rc.system, rc.caps);

    if (*cmd_encode) {
      ac::TupleSet ts = ac::tupleset_from_json(read_json_file(encode_in));
      ac::EncodedParameter p = ac::encode(*sys, rc.system, ts, rc.caps);
      json widths = json::array();
      for (const auto& b : p.brackets) widths.push_back(ac::rational_to_json(b.width()));
      std::cout << json{{"final_depth", ac::index_to_json(p.final_depth)},
                        {"bracket_widths", widths}}
                       .dump()
                << "\n";
      emit(ac::parameter_to_json(p), rc.out_path);
      return kExitOk;
    }

    if (*cmd_decode) {
      ac::EncodedParameter p = ac::parameter_from_json(read_json_file(decode_in));
      ac::SystemPtr psys = ac::make_system(p.system, rc.caps);
      std::optional<ac::Index> count;
      if (decode_count) count = *decode_count;
      ac::TupleSet ts = ac::decode(*psys, p, count, rc.caps);
      emit(ac::tupleset_to_json(ts), rc.out_path);
      return kExitOk;
    }

    if (*cmd_rt) {
      ac::RoundtripReport rep =
          ac::roundtrip(rc.system, rt_trials, rc.seed, rt_lim, rc.caps, rt_jobs);
      emit(ac::report_to_json(rep), rc.out_path);
      std::cerr << "roundtrip: " << rep.successes << "/" << rep.trials
                << " ok in " << rep.elapsed_seconds << "s\n";
      return rep.successes == rep.trials ? kExitOk : kExitPropertyFailure;
    }

    // explore
    if (*ex_best) {
      ac::ParamReal c(ac::LinearForm::rational(sys->basis(), parse_rat_arg(ex_c)));
      auto L = ac::best_left(*sys, c, ex_depth, rc.caps);
      auto R = ac::best_right(*sys, c, ex_depth, rc.caps);
      json out{{"L", json::array()}, {"R", json::array()}};
      for (auto x : L) out["L"].push_back(x);
      for (auto x : R) out["R"].push_back(x);
      emit(out, rc.out_path);
      return kExitOk;
    }
    if (*ex_split) {
      ac::Index d2 = ac::find_split(*sys, ex_d1, rc.caps);
      emit(json(d2), rc.out_path);
      return kExitOk;
    }
    if (*ex_cond) {
      ac::LinearForm a = ac::LinearForm::rational(sys->basis(), parse_rat_arg(ex_a));
      ac::LinearForm b = ac::LinearForm::rational(sys->basis(), parse_rat_arg(ex_b));
      ac::WorkMeter meter(rc.caps.work_budget);
      ac::RationalInterval iv =
          sys->verify_condition_ii(a, b, ex_d, ex_e, rc.caps, meter);
      emit(ac::interval_to_json(iv), rc.out_path);
      return kExitOk;
    }
    if (*ex_gaps) {
      if (ex_n < 2) throw ac::InvalidInput("gaps: need n >= 2");
      std::vector<ac::Index> order(ex_n);
      for (ac::Index i = 0; i < ex_n; ++i) order[i] = i + 1;
      std::sort(order.begin(), order.end(), [&](ac::Index x, ac::Index y) {
        return sys->compare_ff(x, y, rc.caps) < 0;
      });
      std::vector<ac::LinearForm> lengths;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        ac::LinearForm gap = sys->f(order[i + 1]) - sys->f(order[i]);
        bool seen = false;
        for (const auto& l : lengths) seen |= (l == gap);
        if (!seen) lengths.push_back(std::move(gap));
      }
      json out{{"n", ex_n}, {"distinct", lengths.size()}, {"lengths", json::array()}};
      for (const auto& l : lengths) out["lengths"].push_back(ac::linear_form_to_json(l));
      emit(out, rc.out_path);
      return kExitOk;
    }
    throw ac::InvalidInput("no subcommand selected");
  } catch (const ac::Error& e) {
    std::cout << ac::error_to_json(e).dump() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return kExitPropertyFailure;
  }
}
