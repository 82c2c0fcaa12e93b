#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "geonet/birkhoff.hpp"
#include "geonet/network.hpp"
#include "geonet/sweepout.hpp"

namespace geonet {

using Json = nlohmann::ordered_json;

Json points_json(const std::vector<Vec2>& pts);
std::vector<Vec2> points_from_json(const Json& j);

Json path_json(const GeodesicPath& path);
Json curve_json(const Curve& c);
Json sweepout_json(const Sweepout& phi);
// Trajectory as a list of curves (lattice points of every snapshot).
Json trajectory_json(const Surface& surface, const ShorteningOutcome& outcome);
Json outcome_json(const Surface& surface, const ShorteningOutcome& outcome);

// {segments: [{samples: [[x, y], ...], multiplicity: m}, ...]}
Json network_json(const GeodesicNetwork& net);
// Segments are rebuilt as shortest geodesics between the first and last sample.
GeodesicNetwork network_from_json(const Surface& surface, const Json& j);

// Per-junction and per-face records plus parity and hypothesis checks.
Json network_report_json(const Surface& surface, const GeodesicNetwork& net, double tol);

// Header: construction,max_mass,r,concentration,parameters
std::string width_csv_header();
std::string width_csv_row(const std::string& construction, const WidthReport& w, double r, const std::string& parameters);

// Layered SVG in the surface chart; later frames are drawn more opaque.
std::string render_svg(const Surface& surface, const Sweepout& phi);
std::string render_svg(const Surface& surface, const GeodesicNetwork& net);
std::string render_svg(const Surface& surface, const ShorteningOutcome& outcome);

// Fixed-precision number formatting shared by every text output.
std::string fmt(double v, int digits = 10);

void write_text(const std::string& path, const std::string& text);

}  // namespace geonet
