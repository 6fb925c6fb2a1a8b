#include "momentforge/json_io.hpp"

#include "momentforge/errors.hpp"
#include "momentforge/printer.hpp"

namespace momentforge {

Json rational_to_json(const Rational& r) { return rational_to_string(r); }

Json scalar_to_json(const Scalar& s) { return s.to_string(); }

Json surd_to_json(const Surd& s) {
  Json j;
  j["a"] = scalar_to_json(s.a());
  j["b"] = scalar_to_json(s.b());
  j["d"] = s.d();
  return j;
}

Json exppoly_to_json(const ExpPoly& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json jt;
    Json coeffs = Json::array();
    for (const auto& c : t.coeff) coeffs.push_back(surd_to_json(c));
    jt["coeff_poly_in_n"] = coeffs;
    jt["base"] = surd_to_json(t.base);
    terms.push_back(jt);
  }
  Json j;
  j["terms"] = terms;
  if (!f.corrections().empty()) {
    Json corr = Json::object();
    for (const auto& [n, v] : f.corrections()) {
      corr[std::to_string(n)] = surd_to_json(v);
    }
    j["corrections"] = corr;
  }
  j["rendered"] = f.to_string();
  return j;
}

Json varpoly_to_json(const VarPoly& p) {
  Json terms = Json::array();
  for (const auto& [mono, coeff] : p.terms()) {
    Json jt;
    jt["monomial"] = monomial_to_string(mono);
    jt["coeff"] = scalar_to_json(coeff);
    terms.push_back(jt);
  }
  Json j;
  j["terms"] = terms;
  j["rendered"] = p.to_string();
  return j;
}

Json system_to_json(const RecurrenceSystem& s) {
  Json j;
  Json monos = Json::array();
  for (const auto& m : s.monomials) monos.push_back(monomial_to_string(m));
  j["monomials"] = monos;
  Json matrix = Json::array();
  for (const auto& row : s.matrix) {
    Json jr = Json::array();
    for (const auto& c : row) jr.push_back(scalar_to_json(c));
    matrix.push_back(jr);
  }
  j["matrix"] = matrix;
  Json inits = Json::array();
  for (const auto& c : s.initials) inits.push_back(scalar_to_json(c));
  j["initials"] = inits;
  return j;
}

Json type_env_to_json(const TypeEnv& env) {
  Json j = Json::object();
  for (const auto& [var, set] : env) {
    if (set.infinite) {
      j[var] = "infinite";
    } else {
      Json vals = Json::array();
      for (const auto& v : set.values) vals.push_back(scalar_to_json(v));
      j[var] = vals;
    }
  }
  return j;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["accepted"] = v.accepted;
  if (!v.accepted) {
    j["condition"] = v.condition;
    if (v.condition == 1) {
      Json cycle = Json::array();
      for (const auto& x : v.witness_cycle) cycle.push_back(x);
      j["witness"] = Json{{"kind", "polynomial_self_dependency"}, {"cycle", cycle}};
    } else {
      j["witness"] = Json{{"kind", "non_finite_condition"},
                          {"condition", v.witness_condition},
                          {"variable", v.witness_variable}};
    }
  }
  return j;
}

namespace {

Surd surd_from_json(const Json& j) {
  auto parse_scalar = [](const std::string& text) -> Scalar {
    auto r = try_rational_from_string(text);
    if (!r) fail(ErrorCode::ValidationError, "cannot parse scalar '" + text + "'");
    return Scalar(*r);
  };
  return Surd(parse_scalar(j.at("a").get<std::string>()),
              parse_scalar(j.at("b").get<std::string>()), j.at("d").get<std::uint64_t>());
}

}  // namespace

ExpPoly exppoly_from_json(const Json& j) {
  ExpPoly f;
  for (const auto& jt : j.at("terms")) {
    ExpTerm t;
    t.base = surd_from_json(jt.at("base"));
    for (const auto& c : jt.at("coeff_poly_in_n")) t.coeff.push_back(surd_from_json(c));
    f.add_term(t);
  }
  if (j.contains("corrections")) {
    for (const auto& [key, val] : j.at("corrections").items()) {
      f.add_correction(std::stoull(key), surd_from_json(val));
    }
  }
  return f.simplified();
}

std::string source_fingerprint(const std::string& source) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : source) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace momentforge
