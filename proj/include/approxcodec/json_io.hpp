#pragma once

#include <json.hpp>

#include "approxcodec/roundtrip.hpp"

namespace approxcodec {

using json = nlohmann::json;

// ---- rationals: ["p", "q"]; parsing also accepts "p/q" strings and plain
// integers ----

inline json rational_to_json(const Rational& q) {
  return json::array({q.get_num().get_str(), q.get_den().get_str()});
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_array() && j.size() == 2) {
    auto part = [](const json& x) -> std::string {
      return x.is_string() ? x.get<std::string>() : std::to_string(x.get<long long>());
    };
    return parse_rational(part(j[0]) + "/" + part(j[1]));
  }
  throw ParseError("expected a rational (\"p/q\" or [p, q])");
}

inline json interval_to_json(const RationalInterval& iv) {
  return {{"lo", rational_to_json(iv.lo)}, {"hi", rational_to_json(iv.hi)}};
}

inline RationalInterval interval_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) {
    throw ParseError("interval JSON needs lo and hi");
  }
  return {rational_from_json(j.at("lo")), rational_from_json(j.at("hi"))};
}

// ---- indices: emitted as decimal strings inside codec formats, accepted as
// either strings or numbers everywhere ----

inline json index_to_json(Index n) { return std::to_string(n); }

inline Index index_from_json(const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    long long v = j.get<long long>();
    if (v < 0) throw ParseError("negative index");
    return static_cast<Index>(v);
  }
  if (j.is_string()) {
    const std::string& s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad index literal: '" + s + "'");
    }
    return std::stoull(s);
  }
  throw ParseError("expected an index");
}

// ---- symbols and system descriptors ----

inline json symbol_spec_to_json(const SymbolSpec& s) {
  switch (s.kind) {
    case SymKind::Sqrt:
      return {{"kind", "sqrt"}, {"radicand", to_string(s.radicand)}};
    case SymKind::Sine:
      return {{"kind", "sin"}, {"k", s.k}};
    case SymKind::Pi:
      return {{"kind", "pi"}, {"k", s.k}};
    case SymKind::Digits:
      return {{"kind", "digits"}, {"name", s.name}, {"decimal", s.decimal}};
    case SymKind::Unit:
      return {{"kind", "unit"}};
  }
  throw InvalidInput("unknown symbol kind");
}

inline SymbolSpec symbol_spec_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "sqrt") return SymbolSpec::sqrt_of(rational_from_json(j.at("radicand")));
  if (kind == "sin") return SymbolSpec::sine(index_from_json(j.at("k")));
  if (kind == "pi") return SymbolSpec::pi_multiple(index_from_json(j.at("k")));
  if (kind == "digits") {
    return SymbolSpec::digits(j.at("name").get<std::string>(),
                              j.at("decimal").get<std::string>());
  }
  throw ParseError("unknown symbol kind: " + kind);
}

inline json descriptor_to_json(const SystemDescriptor& d) {
  switch (d.kind) {
    case SystemDescriptor::Kind::kronecker: {
      json j{{"kind", "kronecker"},
             {"alpha", symbol_spec_to_json(d.alpha)},
             {"beta", symbol_spec_to_json(d.beta)}};
      if (d.asserted_independent) j["asserted_independent"] = true;
      return j;
    }
    case SystemDescriptor::Kind::sine:
      return {{"kind", "sine"}, {"max_index_hint", d.max_index_hint}};
    case SystemDescriptor::Kind::field: {
      json table = json::array();
      for (const auto& q : d.f_table) table.push_back(rational_to_json(q));
      return {{"kind", "field"}, {"f_table", table}};
    }
  }
  throw InvalidInput("unknown system kind");
}

inline SystemDescriptor descriptor_from_json(const json& j) {
  SystemDescriptor d;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "kronecker") {
    d.kind = SystemDescriptor::Kind::kronecker;
    d.alpha = symbol_spec_from_json(j.at("alpha"));
    d.beta = symbol_spec_from_json(j.at("beta"));
    d.asserted_independent = j.value("asserted_independent", false);
  } else if (kind == "sine") {
    d.kind = SystemDescriptor::Kind::sine;
    d.max_index_hint = j.contains("max_index_hint")
                           ? index_from_json(j.at("max_index_hint"))
                           : 0;
  } else if (kind == "field") {
    d.kind = SystemDescriptor::Kind::field;
    for (const auto& x : j.at("f_table")) d.f_table.push_back(rational_from_json(x));
  } else {
    throw ParseError("unknown system kind: " + kind);
  }
  return d;
}

// ---- linear forms: parallel basis-name and coefficient arrays ----

inline json linear_form_to_json(const LinearForm& f) {
  json names = json::array(), coeffs = json::array();
  bool saw_unit = false;
  for (const auto& [key, c] : f.terms()) {
    if (key.kind == SymKind::Unit) saw_unit = true;
    names.push_back(f.basis()->key_name(key));
    coeffs.push_back(rational_to_json(c));
  }
  if (!saw_unit) {
    // the unit coefficient is always listed, first
    json n2 = json::array({"1"}), c2 = json::array({rational_to_json(Rational(0))});
    for (const auto& x : names) n2.push_back(x);
    for (const auto& x : coeffs) c2.push_back(x);
    names = std::move(n2);
    coeffs = std::move(c2);
  }
  return {{"basis", names}, {"coeffs", coeffs}};
}

inline LinearForm linear_form_from_json(const json& j, const BasisPtr& basis) {
  const json& names = j.at("basis");
  const json& coeffs = j.at("coeffs");
  if (names.size() != coeffs.size()) {
    throw ParseError("basis/coeffs arrays differ in length");
  }
  std::vector<LinearForm::Term> terms;
  for (std::size_t i = 0; i < names.size(); ++i) {
    SymbolKey key = basis->key_from_name(names[i].get<std::string>());
    terms.emplace_back(key, rational_from_json(coeffs[i]));
  }
  return LinearForm::from_terms(basis, std::move(terms));
}

// ---- finite approximations and chains ----

inline json approximation_to_json(const FiniteApproximation& fa,
                                  bool strings = false) {
  json L = json::array(), R = json::array();
  for (Index x : fa.L) L.push_back(strings ? json(index_to_json(x)) : json(x));
  for (Index x : fa.R) R.push_back(strings ? json(index_to_json(x)) : json(x));
  return {{"L", L}, {"R", R}, {"d", strings ? json(index_to_json(fa.d)) : json(fa.d)}};
}

inline FiniteApproximation approximation_from_json(const json& j) {
  FiniteApproximation fa;
  for (const auto& x : j.at("L")) fa.L.push_back(index_from_json(x));
  for (const auto& x : j.at("R")) fa.R.push_back(index_from_json(x));
  fa.d = index_from_json(j.at("d"));
  return fa;
}

inline json chain_to_json(const ApproximationChain& ch, bool strings = false) {
  json out = json::array();
  for (const auto& fa : ch) out.push_back(approximation_to_json(fa, strings));
  return out;
}

inline ApproximationChain chain_from_json(const json& j) {
  ApproximationChain ch;
  for (const auto& x : j) ch.push_back(approximation_from_json(x));
  return ch;
}

// ---- tuple sets and encoded parameters (integers as decimal strings) ----

inline json tupleset_to_json(const TupleSet& ts) {
  json tuples = json::array();
  for (const auto& t : ts.tuples) {
    json row = json::array();
    for (Index x : t) row.push_back(index_to_json(x));
    tuples.push_back(std::move(row));
  }
  return {{"m", index_to_json(ts.m)}, {"tuples", tuples}};
}

inline TupleSet tupleset_from_json(const json& j) {
  TupleSet ts;
  ts.m = index_from_json(j.at("m"));
  for (const auto& row : j.at("tuples")) {
    std::vector<Index> t;
    for (const auto& x : row) t.push_back(index_from_json(x));
    ts.tuples.push_back(std::move(t));
  }
  ts.validate();
  return ts;
}

inline json parameter_to_json(const EncodedParameter& p) {
  json chains = json::array();
  for (const auto& ch : p.chains) chains.push_back(chain_to_json(ch, true));
  json brackets = json::array();
  for (const auto& b : p.brackets) brackets.push_back(interval_to_json(b));
  return {{"system", descriptor_to_json(p.system)},
          {"m", index_to_json(p.m)},
          {"n_tuples", index_to_json(p.n_tuples)},
          {"final_depth", index_to_json(p.final_depth)},
          {"chains", chains},
          {"brackets", brackets}};
}

inline EncodedParameter parameter_from_json(const json& j) {
  EncodedParameter p;
  p.system = descriptor_from_json(j.at("system"));
  p.m = index_from_json(j.at("m"));
  p.n_tuples = index_from_json(j.at("n_tuples"));
  p.final_depth = index_from_json(j.at("final_depth"));
  const json& chains = j.at("chains");
  if (!chains.is_array() || chains.size() != 3) {
    throw ParseError("parameter needs exactly three chains");
  }
  for (int i = 0; i < 3; ++i) p.chains[i] = chain_from_json(chains[i]);
  const json& brackets = j.at("brackets");
  if (!brackets.is_array() || brackets.size() != 3) {
    throw ParseError("parameter needs exactly three brackets");
  }
  for (int i = 0; i < 3; ++i) p.brackets[i] = interval_from_json(brackets[i]);
  return p;
}

// ---- run configuration and roundtrip reports ----

struct RunConfig {
  SystemDescriptor system = SystemDescriptor::kronecker_sqrt(2, 3);
  Caps caps;
  std::uint64_t seed = 0;
  std::string out_path;
};

inline json caps_to_json(const Caps& c) {
  return {{"search_cap", c.search_cap},
          {"precision_cap_bits", c.precision_cap_bits},
          {"depth_cap", c.depth_cap},
          {"work_budget", c.work_budget}};
}

inline Caps caps_from_json(const json& j) {
  Caps c;
  if (j.contains("search_cap")) c.search_cap = index_from_json(j.at("search_cap"));
  if (j.contains("precision_cap_bits")) {
    c.precision_cap_bits = index_from_json(j.at("precision_cap_bits"));
  }
  if (j.contains("depth_cap")) c.depth_cap = index_from_json(j.at("depth_cap"));
  if (j.contains("work_budget")) c.work_budget = index_from_json(j.at("work_budget"));
  c.validate();
  return c;
}

inline json runconfig_to_json(const RunConfig& rc) {
  return {{"system", descriptor_to_json(rc.system)},
          {"caps", caps_to_json(rc.caps)},
          {"seed", rc.seed},
          {"out", rc.out_path}};
}

inline RunConfig runconfig_from_json(const json& j) {
  RunConfig rc;
  if (j.contains("system")) rc.system = descriptor_from_json(j.at("system"));
  if (j.contains("caps")) rc.caps = caps_from_json(j.at("caps"));
  if (j.contains("seed")) rc.seed = index_from_json(j.at("seed"));
  if (j.contains("out")) rc.out_path = j.at("out").get<std::string>();
  return rc;
}

inline json report_to_json(const RoundtripReport& rep) {
  json results = json::array();
  for (const auto& r : rep.results) {
    json jr{{"trial", r.trial},
            {"m", index_to_json(r.input.m)},
            {"n", index_to_json(r.input.tuples.size())},
            {"tuples", tupleset_to_json(r.input)["tuples"]},
            {"ok", r.ok}};
    if (r.ok) {
      jr["final_depth"] = index_to_json(r.final_depth);
      json w = json::array();
      for (const auto& q : r.bracket_widths) w.push_back(rational_to_json(q));
      jr["bracket_widths"] = w;
    } else {
      jr["error"] = {{"code", r.error_code}, {"message", r.error_message}};
    }
    results.push_back(std::move(jr));
  }
  return {{"trials", rep.trials},
          {"successes", rep.successes},
          {"seed", rep.seed},
          {"limits",
           {{"m_min", rep.limits.m_min},
            {"m_max", rep.limits.m_max},
            {"n_min", rep.limits.n_min},
            {"n_max", rep.limits.n_max},
            {"idx_max", rep.limits.idx_max}}},
          {"results", results}};
}

inline json error_to_json(const Error& e) {
  return {{"error", {{"code", e.code()}, {"message", e.what()}}}};
}

}  // namespace approxcodec
