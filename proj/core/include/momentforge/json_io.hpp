#pragma once

#include <string>

#include <json.hpp>

#include "momentforge/analysis.hpp"
#include "momentforge/dependency.hpp"
#include "momentforge/exppoly.hpp"
#include "momentforge/finiteness.hpp"
#include "momentforge/recurrence.hpp"

namespace momentforge {

using Json = nlohmann::ordered_json;

// Exact values serialize as strings: rationals "p/q", field elements in
// canonical rendering.
Json rational_to_json(const Rational& r);
Json scalar_to_json(const Scalar& s);
Json surd_to_json(const Surd& s);                 // {a, b, d}
Json exppoly_to_json(const ExpPoly& f);           // {terms: [...], corrections: {...}}
Json varpoly_to_json(const VarPoly& p);
Json system_to_json(const RecurrenceSystem& s);   // monomials, matrix, initials
Json type_env_to_json(const TypeEnv& env);
Json verdict_to_json(const Verdict& v);

ExpPoly exppoly_from_json(const Json& j);

// Stable FNV-1a 64-bit fingerprint of the program source.
std::string source_fingerprint(const std::string& source);

}  // namespace momentforge
