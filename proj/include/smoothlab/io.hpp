#pragma once

#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "smoothlab/brwre.hpp"
#include "smoothlab/env_model.hpp"
#include "smoothlab/moments.hpp"

namespace smoothlab {

using Json = nlohmann::json;

// Displacement registry document: [{"id", "outcomes":[{"q", "children":
// [{"type":"atom","z":...} | {"type":"gaussian","mu":...,"sigma2":...}]}]}].
// Unknown fields are rejected everywhere.
std::map<std::string, std::shared_ptr<const DisplacementState>> parse_displacements(
    const Json& doc);

// Environment-law document:
// {"states":[{"id", "kind":"finite"|"tilted"|"burst", "prob",
//             "outcomes":[{"p","weights":[...]}],      (finite only)
//             "displacement_ref", "theta"}]}           (tilted only)
// plus an optional sibling "displacements" array to resolve tilted refs.
LawPtr parse_env_law(const Json& doc,
                     const std::map<std::string, std::shared_ptr<const DisplacementState>>& disp);

// BRW-law document: {"states":[{"prob", "displacement_ref"}]}.
BrwLawPtr parse_brw_law(const Json& doc,
                        const std::map<std::string, std::shared_ptr<const DisplacementState>>& disp);

Json extreal_to_json(const ExtReal& v);
Json moment_value_to_json(const MomentValue& mv);
Json verdict_to_json(const Verdict& v);
Json validation_to_json(const ValidationReport& rep);
Json brw_verdict_to_json(const BrwVerdictRecord& rec);

// Round-trip double formatting used by every CSV emitter.
std::string fmt_full(double v);

}  // namespace smoothlab
