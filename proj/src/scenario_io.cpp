#include "svcalloc/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace svcalloc {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<Point2D> points_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of {x, y} objects");
  std::vector<Point2D> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    json_schema::require_object(j[i], {"x", "y"}, at);
    out.push_back({json_schema::get_number(j[i], "x", at), json_schema::get_number(j[i], "y", at)});
  }
  return out;
}

json points_to_json(const std::vector<Point2D>& points) {
  json arr = json::array();
  for (const auto& p : points) arr.push_back({{"x", p.x}, {"y", p.y}});
  return arr;
}

}  // namespace

namespace json_schema {

void require_object(const json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
  }
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

std::int64_t get_integer(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  const json& v = j.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) {
      return static_cast<std::int64_t>(d);
    }
  }
  throw ConfigError(where + "." + key + ": expected an integer");
}

bool get_bool(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return v.get<bool>();
}

}  // namespace json_schema

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": malformed JSON";
    // nlohmann's message starts with "[json.exception.parse_error.101] parse error at ...".
    const std::string what = e.what();
    const auto colon = what.find("parse error");
    if (colon != std::string::npos) msg << " (" << what.substr(colon) << ")";
    throw ConfigError(msg.str());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

GeometryParams geometry_from_json(const json& j, const std::string& where) {
  json_schema::require_object(j, {"view_angle_deg", "view_range", "num_sectors",
                                  "sector_origin_deg"},
                              where);
  GeometryParams g;
  if (j.contains("view_angle_deg")) g.view_angle_deg = json_schema::get_number(j, "view_angle_deg", where);
  if (j.contains("view_range")) g.view_range = json_schema::get_number(j, "view_range", where);
  if (j.contains("num_sectors")) {
    const auto n = json_schema::get_integer(j, "num_sectors", where);
    if (n < 1 || n > 1'000'000) throw ConfigError(where + ".num_sectors: must be >= 1");
    g.num_sectors = static_cast<int>(n);
  }
  if (j.contains("sector_origin_deg")) {
    g.sector_origin_deg = json_schema::get_number(j, "sector_origin_deg", where);
  }
  try {
    g.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return g;
}

UtilityParams utility_from_json(const json& j, const std::string& where) {
  json_schema::require_object(j, {"k1", "k2"}, where);
  UtilityParams u;
  if (j.contains("k1")) u.k1 = json_schema::get_integer(j, "k1", where);
  if (j.contains("k2")) u.k2 = json_schema::get_integer(j, "k2", where);
  try {
    u.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return u;
}

json geometry_to_json(const GeometryParams& g) {
  return {{"view_angle_deg", g.view_angle_deg},
          {"view_range", g.view_range},
          {"num_sectors", g.num_sectors},
          {"sector_origin_deg", g.sector_origin_deg}};
}

json utility_to_json(const UtilityParams& u) { return {{"k1", u.k1}, {"k2", u.k2}}; }

Scenario scenario_from_json(const json& j, const std::string& source) {
  json_schema::require_object(j, {"sensors", "targets", "geometry", "utility", "off_allowed"},
                              source);
  Scenario s;
  if (!j.contains("sensors")) throw ConfigError(source + ": missing key \"sensors\"");
  if (!j.contains("targets")) throw ConfigError(source + ": missing key \"targets\"");
  s.sensors = points_from_json(j.at("sensors"), source + ".sensors");
  s.targets = points_from_json(j.at("targets"), source + ".targets");
  if (j.contains("geometry")) s.geometry = geometry_from_json(j.at("geometry"), source + ".geometry");
  if (j.contains("utility")) s.utility = utility_from_json(j.at("utility"), source + ".utility");
  if (j.contains("off_allowed")) s.off_allowed = json_schema::get_bool(j, "off_allowed", source);
  return s;
}

json scenario_to_json(const Scenario& scenario) {
  return {{"sensors", points_to_json(scenario.sensors)},
          {"targets", points_to_json(scenario.targets)},
          {"geometry", geometry_to_json(scenario.geometry)},
          {"utility", utility_to_json(scenario.utility)},
          {"off_allowed", scenario.off_allowed}};
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  return scenario_from_json(parse_json_text(text, source), source);
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.string());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot write file");
  out << scenario_to_json(scenario).dump(2) << '\n';
}

}  // namespace svcalloc
