#pragma once

#include "anarchy/game.hpp"
#include "anarchy/poa.hpp"
#include "anarchy/smoothness.hpp"
#include "anarchy/worstcase.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace anarchy {

// Scalars serialize exactly: integers as "k", other rationals as "p/q".
// Parsing additionally accepts decimal and scientific forms (exactly
// converted) and bare JSON numbers when integral.

nlohmann::json type_to_json(const ResourceType& t);
ResourceType type_from_json(const nlohmann::json& j);

nlohmann::json game_to_json(const ExplicitGame& g);
// Accepts either the full game schema
//   {"n":…, "types":[…], "resources":[{"type":…,"value":…}], "actions":[…]}
// or a named instance {"instance":"three_cycle"|"two_paths", "v":[…], "n":…}.
ExplicitGame game_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const SmoothnessCertificate& cert);
nlohmann::json poa_bound_to_json(const PoaBound& bound);
nlohmann::json designed_rules_to_json(const DesignedRules& rules);
nlohmann::json worst_case_to_json(const WorstCaseInstance& inst);
WorstCaseInstance worst_case_from_json(const nlohmann::json& j);
nlohmann::json worst_case_report_to_json(const WorstCaseReport& report);

// Canonical text form (sorted keys, 2-space indent, trailing newline);
// serialize(parse(serialize(x))) is byte-identical to serialize(x).
std::string canonical_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace anarchy
