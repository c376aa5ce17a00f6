#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "svcalloc/domain.hpp"

namespace svcalloc {

/// Malformed or schema-violating input file. The message carries the source
/// name and, for syntax errors, the line and column.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text, translating syntax errors into ConfigError with line:column.
nlohmann::json parse_json_text(std::string_view text, const std::string& source);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Scenario schema:
//   { "sensors": [{"x":..,"y":..}], "targets": [...],
//     "geometry": {"view_angle_deg", "view_range", "num_sectors", "sector_origin_deg"},
//     "utility": {"k1", "k2"}, "off_allowed": bool }
// geometry, utility and off_allowed are optional and default to the standard
// setting. Unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& j, const std::string& source);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario parse_scenario(std::string_view text, const std::string& source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

GeometryParams geometry_from_json(const nlohmann::json& j, const std::string& where);
UtilityParams utility_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json geometry_to_json(const GeometryParams& g);
nlohmann::json utility_to_json(const UtilityParams& u);

namespace json_schema {

/// Throws ConfigError if `j` is not an object or has a key outside `allowed`.
void require_object(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where);
double get_number(const nlohmann::json& j, const char* key, const std::string& where);
std::int64_t get_integer(const nlohmann::json& j, const char* key, const std::string& where);
bool get_bool(const nlohmann::json& j, const char* key, const std::string& where);

}  // namespace json_schema

}  // namespace svcalloc
