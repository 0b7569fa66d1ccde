// SPDX-License-Identifier: MIT
#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "nidt/r0.hpp"
#include "nidt/reduction.hpp"
#include "nidt/sderiv.hpp"

namespace nidt {

// Schemas "r0-derivation/1", "s-derivation/1" and "path/1". Readers throw
// DomainError("SchemaViolation") and rebuild contexts, checking the stored ones.
nlohmann::ordered_json r0_to_json(const R0Derivation& d);
R0Derivation r0_from_json(const nlohmann::json& j);

nlohmann::ordered_json s_to_json(const SDerivation& d, const std::set<Position>& open = {});
SDerivation s_from_json(const nlohmann::json& j, std::set<Position>* open = nullptr);

nlohmann::ordered_json path_to_json(const Path& p);
Path path_from_json(const nlohmann::json& j);

nlohmann::json parse_json_text(const std::string& text);  // SchemaViolation on bad JSON
std::string dump(const nlohmann::ordered_json& j);         // two-space indent, trailing newline

}  // namespace nidt
