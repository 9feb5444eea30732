#pragma once

#include "migsched/core.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace migsched {

using json = nlohmann::json;

json rational_to_json(const Rational& value);
/// Accepts a JSON integer or a string in any form parse_rational understands.
Rational rational_from_json(const json& value);

/// {"hosts", "dim", "jobs": [{"id","release","due","length","weight","demand"}]}.
/// A missing "weight" defaults to the job's area; a missing "dim" to 1.
Instance instance_from_json(const json& doc);
json instance_to_json(const Instance& instance);

/// {"placements": {"<jobid>": [[host, slot], ...]}}
Schedule schedule_from_json(const json& doc);
json schedule_to_json(const Schedule& schedule);

json report_to_json(const ValidationReport& report);

json read_json_file(const std::filesystem::path& path);
/// Writes `doc` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& doc);

Instance load_instance(const std::filesystem::path& path);

/// FNV-1a over the canonical instance JSON, as 16 hex digits.
std::string instance_digest(const Instance& instance);

}  // namespace migsched
