#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geonet/io.hpp"

namespace geonet {

struct ScenarioConfig {
  std::string name;
  Json surface;      // optional descriptor overriding the scenario default
  Json parameters = Json::object();
  std::map<std::string, double> tolerances;
  std::string output_dir;  // empty: GEONET_OUT, then "geonet_out"
  bool svg = false;
  std::uint64_t seed = 0x5EED;
};

// Build a config from a JSON document; keys mirror the struct fields.
ScenarioConfig config_from_json(const std::string& name, const Json& j);

enum class Relation { Near, Less, LessEq, Greater, Holds };

struct ReportRow {
  std::string quantity;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::Near;
  std::string basis;  // "analytic", "bound" or "sanity"
  bool pass = false;
};

struct ScenarioReport {
  std::string name;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  std::vector<std::string> artifacts;
  bool passed() const;
};

const std::vector<std::string>& scenario_names();

// Runs the scenario and writes report.json, report.csv (and SVGs when asked) into the output directory.
ScenarioReport run_scenario(const ScenarioConfig& config);

std::string report_table(const ScenarioReport& r);
std::string report_csv(const ScenarioReport& r);
Json report_json(const ScenarioReport& r);

std::string resolve_output_dir(const std::string& requested);

}  // namespace geonet
