// Command line front end. Talks to the library only through geonet.h.
#include <cstdint>
#include <cstdio>
#include <utility>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "geonet/geonet.h"

namespace {

// Exit codes: 0 ok, 1 numerical or assertion failure, 2 bad input.
int exit_code(int status) {
  switch (status) {
    case GEONET_OK:
      return 0;
    case GEONET_CONFIG_INVALID:
    case GEONET_UNKNOWN_SCENARIO:
    case GEONET_IO_FAILURE:
      return 2;
    default:
      return 1;
  }
}

int fail(int status) {
  std::cerr << "error: " << geonet_last_error() << "\n";
  return exit_code(status);
}

struct BadInput {
  std::string what;
};

// Inline JSON if it looks like JSON, otherwise a file name.
std::string json_arg(const std::string& arg) {
  auto p = arg.find_first_not_of(" \t\n");
  if (p != std::string::npos && (arg[p] == '{' || arg[p] == '[')) return arg;
  std::ifstream f(arg);
  if (!f) throw BadInput{"cannot read " + arg};
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// f fills the string; print it or report the error.
template <class F>
int emit(F&& f) {
  char* text = nullptr;
  int status = f(&text);
  if (status != GEONET_OK) return fail(status);
  std::cout << text << "\n";
  geonet_string_free(text);
  return 0;
}

class SurfaceHandle {
 public:
  int open(const std::string& arg) { return geonet_surface_create(json_arg(arg).c_str(), &s_); }
  ~SurfaceHandle() { geonet_surface_free(s_); }
  geonet_surface* get() const { return s_; }

 private:
  geonet_surface* s_ = nullptr;
};

// key=value; the value is read as JSON when it parses, as a string otherwise.
std::pair<std::string, nlohmann::ordered_json> key_value(const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw BadInput{"expected key=value, got '" + kv + "'"};
  std::string v = kv.substr(eq + 1);
  auto j = nlohmann::ordered_json::parse(v, nullptr, false);
  if (j.is_discarded()) j = v;
  return {kv.substr(0, eq), j};
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic networks on convex surfaces"};
  app.require_subcommand(1);

  std::string surface_arg, svg, out_dir, config, kind = "parallel", params, polyline, network;
  std::vector<double> point, vec, target;
  double max_length = 10.0, s = 0.0, angle = 1.5707963267948966, tol = 1e-6, r = 0.1;
  int segments = 0;
  bool closed = false, want_svg = false;
  std::string scenario_name;

  auto add_surface = [&](CLI::App* c) {
    c->add_option("--surface", surface_arg, "surface descriptor: inline JSON or a file")->required();
  };

  auto* surf = app.add_subcommand("surface", "surface queries")->require_subcommand(1);
  auto* info = surf->add_subcommand("info", "print derived quantities");
  add_surface(info);

  auto* geo = app.add_subcommand("geodesic", "single geodesics")->require_subcommand(1);
  auto* shoot = geo->add_subcommand("shoot", "integrate from a point and velocity");
  add_surface(shoot);
  shoot->add_option("--from", point, "x y")->expected(2)->required();
  shoot->add_option("--velocity", vec, "vx vy")->expected(2)->required();
  shoot->add_option("--max-length", max_length);
  auto* conn = geo->add_subcommand("connect", "minimizing geodesic between two points");
  add_surface(conn);
  conn->add_option("--from", point, "x y")->expected(2)->required();
  conn->add_option("--to", target, "x y")->expected(2)->required();
  auto* drop = geo->add_subcommand("drop", "shortest path to the boundary");
  add_surface(drop);
  drop->add_option("--from", point, "x y")->expected(2)->required();

  auto* fbg = app.add_subcommand("fbg", "free boundary geodesics")->require_subcommand(1);
  auto* fbg_find = fbg->add_subcommand("find", "search from a boundary parameter");
  add_surface(fbg_find);
  fbg_find->add_option("--s", s, "boundary arc length of the start");
  fbg_find->add_option("--angle", angle, "initial launch angle from the boundary tangent, in (0, pi)");

  auto* loop = app.add_subcommand("loop", "boundary geodesic loops")->require_subcommand(1);
  auto* loop_find = loop->add_subcommand("find", "search near a seed vertex");
  add_surface(loop_find);
  loop_find->add_option("--s", s, "seed boundary arc length");

  auto* shorten = app.add_subcommand("shorten", "curve shortening")->require_subcommand(1);
  auto* run = shorten->add_subcommand("run", "shorten a polyline");
  add_surface(run);
  run->add_option("--polyline", polyline, "[[x, y], ...] inline or a file")->required();
  run->add_option("--segments", segments, "segment count, 0 for the default");
  run->add_flag("--closed", closed);
  run->add_option("--svg", svg, "write an SVG of the trajectory");

  auto* net = app.add_subcommand("network", "geodesic networks")->require_subcommand(1);
  auto* check = net->add_subcommand("check", "stationarity, faces and parity");
  add_surface(check);
  check->add_option("--network", network, "network JSON inline or a file")->required();
  check->add_option("--tol", tol);
  check->add_option("--svg", svg);

  auto* sw = app.add_subcommand("sweepout", "sweepouts")->require_subcommand(1);
  auto* build = sw->add_subcommand("build", "construct a sweepout and report its width");
  add_surface(build);
  build->add_option("--kind", kind)->check(CLI::IsMember({"parallel", "rotational", "inscribed"}));
  build->add_option("--params", params, "JSON object");
  build->add_option("-r,--radius", r, "concentration radius");
  build->add_option("--svg", svg);

  auto* sc = app.add_subcommand("scenario", "reference scenarios")->require_subcommand(1);
  auto* sc_list = sc->add_subcommand("list", "print scenario names");
  auto* sc_run = sc->add_subcommand("run", "run a scenario and write its report");
  sc_run->add_option("name", scenario_name)->required();
  sc_run->add_option("--config", config, "JSON config inline or a file");
  sc_run->add_option("--out", out_dir, "output directory");
  sc_run->add_flag("--svg", want_svg, "also write SVG figures");
  std::vector<std::string> sc_params, sc_tols;
  std::string sc_surface;
  std::uint64_t seed = 0;
  auto* seed_opt = sc_run->add_option("--seed", seed, "seed for randomized searches");
  sc_run->add_option("--surface", sc_surface, "override the scenario surface (JSON or file)");
  sc_run->add_option("--param", sc_params, "parameter override key=value");
  sc_run->add_option("--tol", sc_tols, "tolerance override key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sc_list) return emit([&](char** t) { return geonet_scenario_list(t); });
    if (*sc_run) {
      // command line flags override keys of the config file
      auto doc = config.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json::parse(json_arg(config), nullptr, false);
      if (doc.is_discarded()) throw BadInput{"config is not valid JSON"};
      if (doc.is_null() && (*seed_opt || !sc_surface.empty() || !sc_params.empty() || !sc_tols.empty()))
        doc = nlohmann::ordered_json::object();
      if (*seed_opt) doc["seed"] = seed;
      if (!sc_surface.empty()) {
        doc["surface"] = nlohmann::ordered_json::parse(json_arg(sc_surface), nullptr, false);
        if (doc["surface"].is_discarded()) throw BadInput{"surface is not valid JSON"};
      }
      for (const auto& kv : sc_params) {
        auto [k, v] = key_value(kv);
        doc["parameters"][k] = v;
      }
      for (const auto& kv : sc_tols) {
        auto [k, v] = key_value(kv);
        doc["tolerances"][k] = v;
      }
      std::string cfg = doc.is_null() ? "" : doc.dump();
      geonet_report* rep = nullptr;
      int st = geonet_scenario_run(scenario_name.c_str(), opt(cfg), opt(out_dir), want_svg, &rep);
      if (st != GEONET_OK) return fail(st);
      std::cout << geonet_report_table(rep);
      int rc = geonet_report_passed(rep) ? 0 : 1;
      geonet_report_free(rep);
      return rc;
    }

    SurfaceHandle h;
    if (int st = h.open(surface_arg); st != GEONET_OK) return fail(st);
    geonet_surface* S = h.get();

    if (*info) return emit([&](char** t) { return geonet_surface_info(S, t); });
    if (*shoot) return emit([&](char** t) { return geonet_shoot(S, point[0], point[1], vec[0], vec[1], max_length, t); });
    if (*conn) return emit([&](char** t) { return geonet_connect(S, point[0], point[1], target[0], target[1], t); });
    if (*drop) return emit([&](char** t) { return geonet_drop(S, point[0], point[1], t); });
    if (*fbg_find) return emit([&](char** t) { return geonet_fbg_find(S, s, angle, t); });
    if (*loop_find) return emit([&](char** t) { return geonet_loop_find(S, s, t); });
    if (*run)
      return emit([&](char** t) { return geonet_shorten_run(S, json_arg(polyline).c_str(), segments, closed, opt(svg), t); });
    if (*check) return emit([&](char** t) { return geonet_network_check(S, json_arg(network).c_str(), tol, opt(svg), t); });
    if (*build) {
      std::string p = params.empty() ? "" : json_arg(params);
      return emit([&](char** t) { return geonet_sweepout_build(S, kind.c_str(), opt(p), r, opt(svg), t); });
    }
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what << "\n";
    return 2;
  }
  return 2;
}
