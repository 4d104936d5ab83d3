#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "approxcodec/approxcodec.hpp"

using namespace approxcodec;

namespace {

std::string cli_bin() {
  const char* p = std::getenv("APPROXCODEC_CLI_BIN");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_bin() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/approxcodec_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  REQUIRE(f.good());
  f << text;
}

}  // namespace

TEST_CASE("explore best-approx matches the frozen engine example") {
  RunResult r = run_cli("explore best-approx --c 1/2 --depth 7");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["L"] == json::array({2}));
  CHECK(j["R"] == json::array({1, 4}));
}

TEST_CASE("explore split and gaps") {
  RunResult r = run_cli("explore split --d1 1");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out) == json(2));

  RunResult g = run_cli("explore gaps --n 1000");
  CHECK(g.exit_code == 0);
  json jg = json::parse(g.out);
  CHECK(jg["distinct"].get<int>() <= 3);
}

TEST_CASE("explore condition-ii emits a usable witness interval") {
  RunResult r = run_cli("explore condition-ii --a 1/4 --b 3/4 --d 5 --e 2");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  RationalInterval iv = interval_from_json(j);
  CHECK(iv.width() > 0);
  CHECK(iv.lo > Rational(1, 4));
  CHECK(iv.hi < Rational(3, 4));
}

TEST_CASE("encode/decode round trip through files") {
  std::string tuples = temp_path("tuples.json");
  std::string param = temp_path("param.json");
  std::string decoded = temp_path("decoded.json");
  write_file(tuples, R"({"m":"1","tuples":[["2"],["1"]]})");

  RunResult e = run_cli("--out " + param + " encode --in " + tuples);
  CHECK(e.exit_code == 0);
  json summary = json::parse(e.out);
  CHECK(summary.contains("final_depth"));
  CHECK(summary["bracket_widths"].size() == 3);

  std::ifstream pf(param);
  REQUIRE(pf.good());
  json pj;
  pf >> pj;
  EncodedParameter p = parameter_from_json(pj);
  CHECK(p.n_tuples == 2);

  RunResult d = run_cli("--out " + decoded + " decode --in " + param);
  CHECK(d.exit_code == 0);
  std::ifstream df(decoded);
  json dj;
  df >> dj;
  CHECK(tupleset_from_json(dj) == TupleSet{1, {{2}, {1}}});

  RunResult d0 = run_cli("decode --in " + param + " --count 0");
  CHECK(d0.exit_code == 0);
  CHECK(json::parse(d0.out)["tuples"] == json::array());
}

TEST_CASE("usage errors exit 2 with a structured error object") {
  std::string dup = temp_path("dup.json");
  write_file(dup, R"({"m":"1","tuples":[["4"],["4"]]})");
  RunResult r = run_cli("encode --in " + dup);
  CHECK(r.exit_code == 2);
  json j = json::parse(r.out);
  CHECK(j["error"]["code"] == "duplicate_tuple");

  std::string garbage = temp_path("garbage.json");
  write_file(garbage, "{not json");
  RunResult g = run_cli("decode --in " + garbage);
  CHECK(g.exit_code == 2);
  CHECK(json::parse(g.out)["error"]["code"] == "parse_error");

  RunResult missing = run_cli("decode --in /nonexistent/param.json");
  CHECK(missing.exit_code == 2);

  RunResult usage = run_cli("explore best-approx --depth 7");  // missing --c
  CHECK(usage.exit_code == 2);
}

TEST_CASE("cap errors exit 3") {
  std::string tuples = temp_path("deep.json");
  write_file(tuples, R"({"m":"3","tuples":[["5","3","7"],["1","2","4"]]})");
  RunResult r = run_cli("--work-cap 20000 encode --in " + tuples);
  CHECK(r.exit_code == 3);
  json j = json::parse(r.out);
  CHECK(j["error"]["code"] == "work_budget_exceeded");

  std::string two = temp_path("two.json");
  write_file(two, R"({"m":"2","tuples":[["2","5"]]})");
  RunResult dcap = run_cli("--depth-cap 1000 encode --in " + two);
  CHECK(dcap.exit_code == 3);
  CHECK(json::parse(dcap.out)["error"]["code"] == "depth_exhausted");
}

TEST_CASE("encode is deterministic byte for byte") {
  std::string tuples = temp_path("det_tuples.json");
  write_file(tuples, R"({"m":"1","tuples":[["3"],["1"]]})");
  std::string p1 = temp_path("det1.json"), p2 = temp_path("det2.json");
  CHECK(run_cli("--out " + p1 + " encode --in " + tuples).exit_code == 0);
  CHECK(run_cli("--out " + p2 + " encode --in " + tuples).exit_code == 0);
  std::ifstream f1(p1), f2(p2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK_FALSE(s1.empty());
  CHECK(s1 == s2);
}

TEST_CASE("roundtrip: deterministic reports, exit reflects success") {
  std::string rep1 = temp_path("rep1.json");
  std::string rep2 = temp_path("rep2.json");
  std::string args =
      "roundtrip --trials 4 --m-min 1 --m-max 1 --n-min 1 --n-max 1 --idx-max 3";
  RunResult a = run_cli("--seed 42 --out " + rep1 + " " + args);
  CHECK(a.exit_code == 0);
  RunResult b = run_cli("--seed 42 --out " + rep2 + " " + args + " --jobs 3");
  CHECK(b.exit_code == 0);
  std::ifstream f1(rep1), f2(rep2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  CHECK_FALSE(s1.empty());

  // trials that exceed caps make the property fail: exit 1
  RunResult fail = run_cli(
      "--seed 7 --work-cap 50000 roundtrip --trials 2 --m-min 3 --m-max 3 "
      "--n-min 6 --n-max 6 --idx-max 20");
  CHECK(fail.exit_code == 1);
}

TEST_CASE("config file via APPROX_CODEC_CONFIG, flags override") {
  std::string cfg = temp_path("config.json");
  write_file(cfg, R"({"caps":{"work_budget":20000},"seed":5})");
  std::string tuples = temp_path("cfg_tuples.json");
  write_file(tuples, R"({"m":"3","tuples":[["5","3","7"],["1","2","4"]]})");
  std::string cmd = "APPROX_CODEC_CONFIG=" + cfg + " " + cli_bin() +
                    " encode --in " + tuples + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = WEXITSTATUS(pclose(pipe));
  CHECK(status == 3);  // tiny work budget from the config applies
  CHECK(json::parse(out)["error"]["code"] == "work_budget_exceeded");

  // flag overrides the config's budget; the run proceeds past it
  std::string cmd2 = "APPROX_CODEC_CONFIG=" + cfg + " " + cli_bin() +
                     " --work-cap 50000000 encode --in " + temp_path("one.json") +
                     " 2>/dev/null";
  write_file(temp_path("one.json"), R"({"m":"1","tuples":[["1"]]})");
  FILE* pipe2 = popen(cmd2.c_str(), "r");
  REQUIRE(pipe2 != nullptr);
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe2)) (void)n;
  CHECK(WEXITSTATUS(pclose(pipe2)) == 0);
}

TEST_CASE("system flag selects the system") {
  std::string sysf = temp_path("system.json");
  write_file(sysf,
             R"({"kind":"kronecker","alpha":{"kind":"sqrt","radicand":2},)"
             R"("beta":{"kind":"sqrt","radicand":3}})");
  RunResult r = run_cli("--system " + sysf + " explore best-approx --c 1/2 --depth 7");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["L"] == json::array({2}));

  std::string sine = temp_path("sine.json");
  write_file(sine, R"({"kind":"sine","max_index_hint":100})");
  RunResult s = run_cli("--system " + sine + " explore best-approx --c 1/2 --depth 6");
  CHECK(s.exit_code == 0);
  // values below 1/2 among sin(1..6) start at sin(3) ~ 0.141, and no later
  // one exceeds it; the one right point is sin(1) ~ 0.841
  CHECK(json::parse(s.out)["L"] == json::array({3}));
  CHECK(json::parse(s.out)["R"] == json::array({1}));
}
