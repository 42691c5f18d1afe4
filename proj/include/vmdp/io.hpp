#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "vmdp/dynamics.hpp"
#include "vmdp/model.hpp"

namespace vmdp::io {

// Model JSON (all indices 0-based):
//   {"num_states": S, "horizon": T, "num_objectives": k,
//    "actions_per_state": [k_0, ...], "alpha": [...],
//    "transitions": p[t][s][a][j], "rewards": r[t][s][a][i],
//    "terminal_rewards": rT[s][i]}
nlohmann::json model_to_json(const Model& m);
/// Throws ParseError on missing fields or ragged arrays, ModelError on
/// structurally impossible sizes. Probability axioms are left to validate_model.
Model model_from_json(const nlohmann::json& j);

// Policy JSON: {"q": q[t][s][a]} or the deterministic shorthand {"d": d[t][s]}.
nlohmann::json policy_to_json(const Policy& pi);
Policy policy_from_json(const Layout& layout, const nlohmann::json& j);

/// Parse a whole file as JSON; ParseError on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);
Model read_model_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

// Design CSV: header `component,alternative,cost,reliability`, 1-based
// component (1 or 2) and alternative numbers.
DesignInstance design_from_csv(std::istream& in);
void design_to_csv(const DesignInstance& d, std::ostream& out);

}  // namespace vmdp::io
