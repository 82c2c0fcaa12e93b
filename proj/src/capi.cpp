#include "geonet/geonet.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "geonet/scenarios.hpp"

struct geonet_surface {
  geonet::Surface surface;
};

struct geonet_report {
  geonet::ScenarioReport report;
  std::string table;
  std::string json;
};

namespace {

using namespace geonet;

thread_local std::string last_error;

static_assert(int(ErrorCode::Internal) == GEONET_INTERNAL, "status codes out of sync");

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
int guard(F&& f) {
  try {
    f();
    last_error.clear();
    return GEONET_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return int(e.code());
  } catch (const Json::exception& e) {
    last_error = std::string("ConfigInvalid: ") + e.what();
    return GEONET_CONFIG_INVALID;
  } catch (const std::exception& e) {
    last_error = std::string("Internal: ") + e.what();
    return GEONET_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::ConfigInvalid, std::string(what) + " is null");
}

void put(char** out, const Json& j) {
  require(out, "output pointer");
  *out = dup(j.dump(1));
}

Json parse(const char* text, const char* what) {
  require(text, what);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": " + e.what());
  }
}

const Surface& S(const geonet_surface* s) {
  require(s, "surface");
  return s->surface;
}

Json shoot_json(const ShootResult& r) {
  Json j = path_json(r.path);
  j["exit"] = r.exit == ExitKind::HitBoundary ? "boundary" : "length";
  if (r.exit == ExitKind::HitBoundary) {
    j["boundary_s"] = r.s_exit;
    j["exit_angle"] = r.exit_angle;
  }
  return j;
}

}  // namespace

extern "C" {

const char* geonet_status_name(int status) {
  if (status < 0 || status > GEONET_INTERNAL) return "Unknown";
  return error_name(static_cast<ErrorCode>(status));
}

const char* geonet_last_error(void) { return last_error.c_str(); }

void geonet_string_free(char* s) { std::free(s); }

int geonet_surface_create(const char* descriptor_json, geonet_surface** out) {
  return guard([&] {
    require(out, "output pointer");
    require(descriptor_json, "descriptor");
    *out = new geonet_surface{Surface::from_descriptor(descriptor_json)};
  });
}

void geonet_surface_free(geonet_surface* surface) { delete surface; }

int geonet_surface_info(const geonet_surface* surface, char** json_out) {
  return guard([&] {
    const Surface& s = S(surface);
    Json j;
    j["kind"] = kind_name(s.kind());
    j["descriptor"] = Json::parse(s.descriptor());
    j["boundary_length"] = s.boundary_length();
    j["area"] = s.area();
    j["diameter"] = s.diameter();
    j["max_curvature"] = s.max_curvature();
    j["min_boundary_curvature"] = s.min_boundary_curvature();
    try {
      j["segment_bound"] = lambda_epsilon(s);
    } catch (const Error&) {
      j["segment_bound"] = nullptr;  // sharp corners
    }
    if (!s.is_flat()) {
      const auto& p = s.profile();
      j["boundary_radius"] = p.boundary_radius();
      j["meridian_length"] = p.meridian_length();
    }
    put(json_out, j);
  });
}

int geonet_shoot(const geonet_surface* surface, double x, double y, double vx, double vy, double max_length,
                 char** json_out) {
  return guard([&] { put(json_out, shoot_json(shoot(S(surface), {x, y}, {vx, vy}, max_length))); });
}

int geonet_connect(const geonet_surface* surface, double px, double py, double qx, double qy, char** json_out) {
  return guard([&] { put(json_out, path_json(connect(S(surface), {px, py}, {qx, qy}))); });
}

int geonet_drop(const geonet_surface* surface, double x, double y, char** json_out) {
  return guard([&] { put(json_out, path_json(drop_to_boundary(S(surface), {x, y}))); });
}

int geonet_fbg_find(const geonet_surface* surface, double boundary_s, double angle, char** json_out) {
  return guard([&] {
    const Surface& s = S(surface);
    auto path = find_free_boundary_geodesic(s, boundary_s, angle);
    Json j = path_json(path);
    j["second_variation"] = second_variation_normal(s, path);
    put(json_out, j);
  });
}

int geonet_loop_find(const geonet_surface* surface, double seed_s, char** json_out) {
  return guard([&] {
    auto loop = find_boundary_geodesic_loop(S(surface), seed_s);
    Json j = path_json(loop.path);
    j["vertex_s"] = loop.vertex_s;
    j["angle_start"] = loop.angle_start;
    j["angle_end"] = loop.angle_end;
    j["closure_gap"] = loop.closure_gap;
    j["tangential_residual"] = loop.tangential_residual;
    put(json_out, j);
  });
}

int geonet_shorten_run(const geonet_surface* surface, const char* polyline_json, int segments, int closed,
                       const char* svg_path, char** json_out) {
  return guard([&] {
    const Surface& s = S(surface);
    auto pts = points_from_json(parse(polyline_json, "polyline"));
    if (pts.empty()) throw Error(ErrorCode::ConfigInvalid, "polyline is empty");
    int L = segments;
    if (L <= 0) {
      double len = 0.0;
      for (size_t i = 0; i + 1 < pts.size(); ++i) len += connect(s, pts[i], pts[i + 1]).length;
      if (closed && pts.size() > 2) len += connect(s, pts.back(), pts.front()).length;
      L = default_segment_count(s, len);
    }
    auto out = shorten_run(s, project_to_lambda(s, pts, L, closed != 0));
    if (svg_path) write_text(svg_path, render_svg(s, out));
    put(json_out, outcome_json(s, out));
  });
}

int geonet_network_check(const geonet_surface* surface, const char* network_json, double tol, const char* svg_path,
                         char** json_out) {
  return guard([&] {
    const Surface& s = S(surface);
    auto net = network_from_json(s, parse(network_json, "network"));
    if (svg_path) write_text(svg_path, render_svg(s, net));
    put(json_out, network_report_json(s, net, tol));
  });
}

int geonet_sweepout_build(const geonet_surface* surface, const char* kind, const char* params_json, double r,
                          const char* svg_path, char** json_out) {
  return guard([&] {
    const Surface& s = S(surface);
    require(kind, "kind");
    Json p = params_json ? parse(params_json, "params") : Json::object();
    if (!p.is_object()) throw Error(ErrorCode::ConfigInvalid, "params must be an object");
    const std::string k = kind;
    Sweepout phi;
    Json extra = Json::object();
    if (k == "parallel") {
      phi = parallel_sweepout(s, unit_from_angle(p.value("direction", 0.0)), p.value("frames", 256));
    } else if (k == "rotational") {
      phi = rotational_sweepout(s, p.value("frames", 256));
    } else if (k == "inscribed") {
      auto ip = inscribed_polygon_sweepout(s, p.value("n", 12), p.value("frames", 512));
      phi = std::move(ip.sweepout);
      extra["bound"] = ip.bound;
      extra["boundary_length"] = ip.boundary_length;
      extra["gap"] = ip.gap();
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown sweepout kind '" + k + "'");
    }
    auto w = width_report(s, phi, r);
    if (svg_path) write_text(svg_path, render_svg(s, phi));
    Json j;
    j["construction"] = phi.construction;
    j["max_mass"] = w.max_mass;
    j["r"] = r;
    j["concentration"] = w.concentration;
    for (auto& [key, v] : extra.items()) j[key] = v;
    j["sweepout"] = sweepout_json(phi);
    put(json_out, j);
  });
}

int geonet_scenario_list(char** json_out) {
  return guard([&] { put(json_out, Json(scenario_names())); });
}

int geonet_scenario_run(const char* name, const char* config_json, const char* out_dir, int svg, geonet_report** out) {
  return guard([&] {
    require(name, "scenario name");
    require(out, "output pointer");
    Json cfg = config_json ? parse(config_json, "config") : Json();
    ScenarioConfig c = config_from_json(name, cfg);
    if (out_dir) c.output_dir = out_dir;
    if (svg) c.svg = true;
    auto* r = new geonet_report;
    try {
      r->report = run_scenario(c);
    } catch (...) {
      delete r;
      throw;
    }
    r->table = report_table(r->report);
    r->json = report_json(r->report).dump(1);
    *out = r;
  });
}

int geonet_report_passed(const geonet_report* report) { return report && report->report.passed() ? 1 : 0; }

const char* geonet_report_table(const geonet_report* report) { return report ? report->table.c_str() : ""; }

const char* geonet_report_json(const geonet_report* report) { return report ? report->json.c_str() : ""; }

void geonet_report_free(geonet_report* report) { delete report; }

}  // extern "C"
