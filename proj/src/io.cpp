#include "geonet/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace geonet {

std::string fmt(double v, int digits) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Json points_json(const std::vector<Vec2>& pts) {
  Json a = Json::array();
  for (Vec2 p : pts) a.push_back({p.x, p.y});
  return a;
}

std::vector<Vec2> points_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ConfigInvalid, "expected an array of [x, y] pairs");
  std::vector<Vec2> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::ConfigInvalid, "point must be [x, y]");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

Json path_json(const GeodesicPath& path) {
  return {{"start", {path.start.x, path.start.y}},
          {"initial_velocity", {path.initial_velocity.x, path.initial_velocity.y}},
          {"length", path.length},
          {"samples", points_json(path.samples)}};
}

Json curve_json(const Curve& c) {
  return {{"closed", c.closed}, {"length", c.length}, {"samples", points_json(c.samples)}};
}

Json sweepout_json(const Sweepout& phi) {
  Json frames = Json::array();
  for (const auto& f : phi.frames) {
    Json curves = Json::array();
    for (const auto& c : f.cycle.curves) curves.push_back(curve_json(c));
    frames.push_back({{"t", f.t}, {"mass", f.cycle.mass()}, {"curves", curves}});
  }
  return {{"construction", phi.construction}, {"frames", frames}};
}

Json trajectory_json(const Surface& surface, const ShorteningOutcome& outcome) {
  Json a = Json::array();
  for (const auto& s : outcome.trajectory) a.push_back(points_json(s.vertices(surface)));
  return a;
}

Json outcome_json(const Surface& surface, const ShorteningOutcome& outcome) {
  return {{"kind", outcome_name(outcome.kind)},
          {"iterations", outcome.iterations},
          {"held_steps", outcome.held_steps},
          {"lengths", outcome.lengths},
          {"collapse_point", {outcome.collapse_point.x, outcome.collapse_point.y}},
          {"orthogonality_residual", outcome.residuals.orthogonality},
          {"break_residual", outcome.residuals.breaks},
          {"trajectory", trajectory_json(surface, outcome)}};
}

Json network_json(const GeodesicNetwork& net) {
  Json segs = Json::array();
  for (const auto& s : net.segments) segs.push_back({{"samples", points_json(s.path.samples)}, {"multiplicity", s.multiplicity}});
  return {{"segments", segs}};
}

GeodesicNetwork network_from_json(const Surface& surface, const Json& j) {
  if (!j.contains("segments") || !j["segments"].is_array())
    throw Error(ErrorCode::ConfigInvalid, "network needs a segments array");
  GeodesicNetwork net;
  for (const auto& s : j["segments"]) {
    auto pts = points_from_json(s.at("samples"));
    if (pts.size() < 2) throw Error(ErrorCode::ConfigInvalid, "segment needs at least two samples");
    int m = s.value("multiplicity", 1);
    if (m < 1) throw Error(ErrorCode::ConfigInvalid, "multiplicity must be positive");
    net.add(connect(surface, pts.front(), pts.back()), m);
  }
  return net;
}

Json network_report_json(const Surface& surface, const GeodesicNetwork& net, double tol) {
  Json out;
  out["mass"] = mass(net);
  Json js = Json::array();
  bool all_pass = true;
  for (const auto& j : check_stationarity(surface, net, tol)) {
    js.push_back({{"location", {j.location.x, j.location.y}},
                  {"on_boundary", j.on_boundary},
                  {"density", j.density},
                  {"residual", j.residual},
                  {"pass", j.pass},
                  {"crossing", j.crossing},
                  {"class", junction_class_name(j.classification)}});
    all_pass = all_pass && j.pass;
  }
  out["junctions"] = js;
  out["stationary"] = all_pass;

  auto sub = build_subdivision(surface, net);
  Json fs = Json::array();
  for (const auto& f : sub.faces) {
    auto t = gauss_bonnet_terms(surface, f);
    auto star = check_star_property(f);
    fs.push_back({{"euler_char", f.euler_char},
                  {"area", f.area},
                  {"curvature", t.curvature},
                  {"boundary_kg", t.boundary_kg},
                  {"turning", t.turning},
                  {"gauss_bonnet_residual", t.residual},
                  {"star_property", star.ok},
                  {"star_violations", star.violations}});
  }
  out["faces"] = fs;

  try {
    auto dec = parity_decomposition(sub);
    out["parity"] = {{"I", dec.I}, {"J", dec.J}, {"odd_edges", dec.gamma}, {"identity", parity_identity_holds(sub, dec)}};
  } catch (const Error& e) {
    out["parity"] = {{"error", error_name(e.code())}, {"message", e.what()}};
  }

  auto h = check_hypotheses(surface, net);
  out["hypotheses"] = {{"integer_density", h.integer_density},
                       {"angles_below_pi", h.angles_below_pi},
                       {"boundary_angles", h.boundary_angles},
                       {"components", h.components},
                       {"touches_boundary", h.touches_boundary},
                       {"violations", h.violations}};
  return out;
}

std::string width_csv_header() { return "construction,max_mass,r,concentration,parameters\n"; }

std::string width_csv_row(const std::string& construction, const WidthReport& w, double r, const std::string& parameters) {
  std::string p = parameters;
  for (char& c : p)
    if (c == '"') c = '\'';
  return construction + "," + fmt(w.max_mass, 12) + "," + fmt(r) + "," + fmt(w.concentration, 12) + ",\"" + p + "\"\n";
}

namespace {

struct Canvas {
  Vec2 lo, hi;
  double scale = 1.0;
  static constexpr double kSize = 480.0, kMargin = 10.0;

  explicit Canvas(const Surface& s) {
    if (s.is_flat()) {
      lo = hi = s.boundary_eval(0.0).point;
      const int n = 720;
      for (int i = 0; i < n; ++i) {
        Vec2 p = s.boundary_eval(s.boundary_length() * i / n).point;
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
      }
    } else {
      double R = s.profile().s_boundary;
      lo = {-R, -R};
      hi = {R, R};
    }
    scale = kSize / std::max(hi.x - lo.x, hi.y - lo.y);
  }
  std::string xy(Vec2 p) const {
    return fmt(kMargin + (p.x - lo.x) * scale, 7) + "," + fmt(kMargin + (hi.y - p.y) * scale, 7);
  }
  double width() const { return (hi.x - lo.x) * scale + 2 * kMargin; }
  double height() const { return (hi.y - lo.y) * scale + 2 * kMargin; }
};

std::string header(const Canvas& c) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(c.width(), 6) << "\" height=\"" << fmt(c.height(), 6)
    << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return o.str();
}

std::string boundary_layer(const Surface& s, const Canvas& c) {
  std::ostringstream o;
  o << "<g id=\"boundary\"><polygon fill=\"#f4f4f4\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  const int n = 720;
  for (int i = 0; i < n; ++i) o << (i ? " " : "") << c.xy(s.boundary_eval(s.boundary_length() * i / n).point);
  o << "\"/></g>\n";
  return o.str();
}

std::string polyline(const Canvas& c, const std::vector<Vec2>& pts, bool closed, const std::string& style) {
  if (pts.size() == 1) {
    return "<circle cx=\"" + fmt(Canvas::kMargin + (pts[0].x - c.lo.x) * c.scale, 7) + "\" cy=\"" +
           fmt(Canvas::kMargin + (c.hi.y - pts[0].y) * c.scale, 7) + "\" r=\"2\" " + style + "/>\n";
  }
  std::string s = closed ? "<polygon fill=\"none\" " : "<polyline fill=\"none\" ";
  s += style + " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + c.xy(pts[i]);
  return s + "\"/>\n";
}

std::string frame_style(size_t k, size_t n, const char* color) {
  double a = n > 1 ? 0.15 + 0.85 * double(k) / double(n - 1) : 1.0;
  return std::string("stroke=\"") + color + "\" stroke-width=\"1\" stroke-opacity=\"" + fmt(a, 4) + "\"";
}

}  // namespace

std::string render_svg(const Surface& surface, const Sweepout& phi) {
  Canvas c(surface);
  std::string s = header(c) + boundary_layer(surface, c);
  for (size_t k = 0; k < phi.frames.size(); ++k) {
    s += "<g id=\"frame" + std::to_string(k) + "\">\n";
    for (const auto& cv : phi.frames[k].cycle.curves)
      if (!cv.samples.empty()) s += polyline(c, cv.samples, cv.closed, frame_style(k, phi.frames.size(), "#1f5fa8"));
    s += "</g>\n";
  }
  return s + "</svg>\n";
}

std::string render_svg(const Surface& surface, const GeodesicNetwork& net) {
  Canvas c(surface);
  std::string s = header(c) + boundary_layer(surface, c);
  for (size_t k = 0; k < net.segments.size(); ++k) {
    const auto& seg = net.segments[k];
    s += "<g id=\"segment" + std::to_string(k) + "\">\n";
    s += polyline(c, seg.path.samples, false,
                  "stroke=\"#b02020\" stroke-width=\"" + fmt(1.0 + seg.multiplicity, 3) + "\"");
    s += "</g>\n";
  }
  return s + "</svg>\n";
}

std::string render_svg(const Surface& surface, const ShorteningOutcome& outcome) {
  Canvas c(surface);
  std::string s = header(c) + boundary_layer(surface, c);
  const size_t n = outcome.trajectory.size();
  for (size_t k = 0; k < n; ++k) {
    const auto& g = outcome.trajectory[k];
    s += "<g id=\"step" + std::to_string(k) + "\">\n";
    s += polyline(c, g.vertices(surface), g.closed, frame_style(k, n, "#2a7d3a"));
    s += "</g>\n";
  }
  return s + "</svg>\n";
}

void write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  f << text;
  if (!f) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

}  // namespace geonet
