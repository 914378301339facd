#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shadowlab/equiproj.hpp"
#include "shadowlab/polytope.hpp"
#include "shadowlab/shadow.hpp"
#include "shadowlab/walk.hpp"

namespace shadowlab::io {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

json rat_json(const Rat& r);
// Accepts "p/q" strings and plain integers.
Rat rat_from(const json& j, const std::string& where);
json vec_json(const Vec& v);
Vec vec_from(const json& j, const std::string& where);
json basis_json(const std::vector<Vec>& basis);
// A bare array of vectors or {"basis": [...]}.
std::vector<Vec> basis_from(const json& j, const std::string& where);

// Throws InputError naming the first offending field.
void validate_polytope_json(const json& j);
json polytope_json(const Polytope& p);
Polytope polytope_from(const json& j);

json plane_json(const ProjectionPlane& w);
json shadow_json(const Polytope& p, const ProjectionPlane& w);
json walk_json(const Polytope& p, const WalkPlan& plan, const WalkCertificate& cert);
json verdict_json(const Polytope& p, const Verdict& v);
json equivalence_json(const EquivalenceReport& r);

// Parses text as JSON, or reads it from a file when it does not look like JSON.
json load(const std::string& text_or_path);

} // namespace shadowlab::io
