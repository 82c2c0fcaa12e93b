#include "geonet/scenarios.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "geonet/quadrature.hpp"

namespace geonet {

namespace {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Near: return "near";
    case Relation::Less: return "less";
    case Relation::LessEq: return "at_most";
    case Relation::Greater: return "greater";
    case Relation::Holds: return "holds";
  }
  return "?";
}

class Run {
 public:
  Run(const ScenarioConfig& cfg, const std::string& dir) : cfg_(cfg), dir_(dir) { report.name = cfg.name; }

  double tol(const std::string& key, double def) const {
    auto it = cfg_.tolerances.find(key);
    return it == cfg_.tolerances.end() ? def : it->second;
  }
  double param(const std::string& key, double def) const {
    if (!cfg_.parameters.contains(key)) return def;
    const auto& v = cfg_.parameters[key];
    if (!v.is_number()) throw Error(ErrorCode::ConfigInvalid, "parameter '" + key + "' must be a number");
    return v.get<double>();
  }
  int iparam(const std::string& key, int def) const {
    double v = param(key, def);
    if (v != std::floor(v)) throw Error(ErrorCode::ConfigInvalid, "parameter '" + key + "' must be an integer");
    return int(v);
  }
  std::vector<double> list(const std::string& key, std::vector<double> def) const {
    if (!cfg_.parameters.contains(key)) return def;
    const auto& v = cfg_.parameters[key];
    if (!v.is_array() || v.empty()) throw Error(ErrorCode::ConfigInvalid, "parameter '" + key + "' must be a list");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(x.get<double>());
    return out;
  }
  Surface surface(const std::function<Surface()>& def) const {
    return cfg_.surface.is_null() ? def() : Surface::from_descriptor(cfg_.surface.dump());
  }
  std::uint64_t seed() const { return cfg_.seed; }

  void near(const std::string& q, double computed, double expected, double tol, const char* basis) {
    add(q, computed, expected, tol, Relation::Near, basis, std::abs(computed - expected) <= tol);
  }
  void less(const std::string& q, double computed, double bound, const char* basis) {
    add(q, computed, bound, 0.0, Relation::Less, basis, computed < bound);
  }
  void at_most(const std::string& q, double computed, double bound, double tol, const char* basis) {
    add(q, computed, bound, tol, Relation::LessEq, basis, computed <= bound + tol);
  }
  void greater(const std::string& q, double computed, double bound, const char* basis) {
    add(q, computed, bound, 0.0, Relation::Greater, basis, computed > bound);
  }
  void holds(const std::string& q, bool ok, const char* basis) {
    add(q, ok ? 1.0 : 0.0, 1.0, 0.0, Relation::Holds, basis, ok);
  }
  void note(const std::string& s) { report.notes.push_back(s); }

  void artifact(const std::string& file, const std::string& text) {
    std::string path = dir_ + "/" + file;
    write_text(path, text);
    report.artifacts.push_back(path);
  }
  void svg(const std::string& file, const std::string& text) {
    if (cfg_.svg) artifact(file, text);
  }

  ScenarioReport report;

 private:
  void add(const std::string& q, double c, double e, double t, Relation r, const char* basis, bool pass) {
    report.rows.push_back({q, c, e, t, r, basis, pass});
  }
  const ScenarioConfig& cfg_;
  std::string dir_;
};

// Sparse copy for drawing.
Sweepout thin(const Sweepout& phi, size_t keep) {
  if (phi.frames.size() <= keep) return phi;
  Sweepout out;
  out.construction = phi.construction;
  for (size_t i = 0; i < keep; ++i) out.frames.push_back(phi.frames[i * (phi.frames.size() - 1) / (keep - 1)]);
  return out;
}

void disk_widths(Run& run) {
  Surface d = run.surface([] { return Surface::disk(); });
  const double r = run.param("r", 0.1);
  auto fbg = find_free_boundary_geodesic(d, run.param("boundary_s", 0.0), kPi / 2);
  run.near("free boundary geodesic length", fbg.length, 2.0, run.tol("length", 1e-6), "analytic");

  auto phi = parallel_sweepout(d, unit_from_angle(run.param("direction", 0.3)), run.iparam("frames", 256));
  auto w = width_report(d, phi, r);
  run.near("parallel sweepout max mass", w.max_mass, 2.0, run.tol("length", 1e-6), "analytic");
  run.at_most("concentration at r (chord inside a ball)", w.concentration, 2 * r, 1e-12, "bound");
  run.holds("sweepout ends are empty", phi.frames.front().cycle.mass() == 0 && phi.frames.back().cycle.mass() == 0,
            "sanity");

  auto sigma = project_to_lambda(d, fbg.samples, default_segment_count(d, fbg.length));
  StepReport step;
  auto next = shorten_step(d, sigma, &step);
  run.near("length change of the diameter under one step", std::abs(next.total_length - sigma.total_length), 0.0,
           run.tol("fixed_point", 1e-10), "analytic");
  auto res = curve_residuals(d, next);
  run.at_most("orthogonality residual after the step", res.orthogonality, 0.0, 1e-6, "analytic");

  run.artifact("widths.csv", width_csv_header() + width_csv_row(phi.construction, w, r, d.descriptor()));
  run.artifact("sweepout.json", sweepout_json(phi).dump() + "\n");
  run.svg("sweepout.svg", render_svg(d, thin(phi, 64)));
}

void second_variation(Run& run) {
  Surface d = run.surface([] { return Surface::disk(); });
  auto fbg = find_free_boundary_geodesic(d, 0.0, kPi / 2);
  run.near("second variation of the diameter", second_variation_normal(d, fbg), -2.0, run.tol("formula", 1e-8),
           "analytic");
  // chords at height t between the two circle points: L(t) = 2 sqrt(1 - t^2)
  auto chord = [&](double t) {
    double x = std::sqrt(1 - t * t);
    return connect(d, {-x, t}, {x, t}).length;
  };
  const double h = run.param("fd_step", 1e-3);
  double fd = (chord(h) - 2 * chord(0) + chord(-h)) / (h * h);
  run.near("finite-difference second derivative of chord length", fd, -2.0, run.tol("finite_difference", 1e-4),
           "bound");
}

void sector_ls(Run& run) {
  const double angle = 2 * kPi / 5;
  Surface s = run.surface([&] { return Surface::rounded_sector(1.0, angle, 0.0); });
  const double h = std::sin(angle);
  auto phi = parallel_sweepout(s, {0, 1}, run.iparam("frames", 1024));
  auto w = width_report(s, phi, run.param("r", 0.05));
  run.near("edge-perpendicular sweepout max mass", w.max_mass, h, run.tol("width", 1e-6), "analytic");

  auto best = min_max_chord_direction(s, run.iparam("coarse", 180));
  double off = std::min(std::abs(best.angle - kPi / 2), std::abs(best.angle - (angle + kPi / 2)));
  run.near("direction search offset from an edge normal (rad)", off, 0.0, run.tol("direction", 1e-4), "bound");
  run.near("direction search max chord", best.max_chord, h, run.tol("width", 1e-6), "bound");

  // the five sectors of the disk are congruent, so each has the same first width
  double ls = ls_lower_bound(std::vector<double>(5, w.max_mass));
  run.near("sum of five sector widths", ls, 5 * h, run.tol("sum", 5e-6), "analytic");
  run.greater("sum of five sector widths vs 4", ls, 4.0, "analytic");

  run.artifact("widths.csv", width_csv_header() + width_csv_row(phi.construction, w, run.param("r", 0.05), s.descriptor()));
  run.svg("sweepout.svg", render_svg(s, thin(phi, 48)));
}

void triangle_height(Run& run) {
  auto rhos = run.list("rounding", {1e-1, 3e-2, 1e-2});
  std::vector<double> hs;
  std::string csv = width_csv_header();
  for (double rho : rhos) {
    Surface t = Surface::equilateral_triangle(1.0, rho);
    auto dir = min_max_chord_direction(t);
    auto phi = parallel_sweepout(t, unit_from_angle(dir.angle), 256);
    auto w = width_report(t, phi, 0.05);
    hs.push_back(w.max_mass);
    csv += width_csv_row(phi.construction, w, 0.05, t.descriptor());
    run.note("rounding " + fmt(rho) + ": direction " + fmt(dir.angle) + ", max mass " + fmt(w.max_mass, 12));
  }
  double h0 = extrapolate_linear(rhos, hs);
  run.near("heights extrapolated to zero rounding", h0, std::pow(3.0, 0.25), run.tol("extrapolation", 1e-3), "bound");

  // unit-area triangles: base scaled by `stretch`, apex moved sideways by `shift` times the base
  const double a = std::sqrt(4 / std::sqrt(3.0));
  const double eq = min_max_chord_direction(Surface::equilateral_triangle(1.0, 0.0)).max_chord;
  run.note("sharp equilateral value " + fmt(eq, 12));
  for (double stretch : run.list("stretch", {0.8, 0.9, 1.1, 1.2}))
    for (double shift : run.list("shift", {0.0, 0.1, 0.2})) {
      double b = a * stretch, H = 2.0 / b;
      Surface t = Surface::rounded_polygon({{-b / 2, 0}, {b / 2, 0}, {shift * b, H}}, 0.0);
      double v = min_max_chord_direction(t).max_chord;
      run.less("perturbed triangle (stretch " + fmt(stretch) + ", shift " + fmt(shift) + ") vs equilateral", v, eq,
               "analytic");
    }
  run.artifact("widths.csv", csv);
}

void boundary_inequality(Run& run) {
  Surface d = Surface::disk();
  const int frames = run.iparam("frames", 512);
  const int nd = run.iparam("n_disk", 12);
  auto pd = inscribed_polygon_sweepout(d, nd, frames);
  run.near("inscribed polygon length on the disk", pd.bound, 2 * nd * std::sin(kPi / nd), run.tol("polygon", 1e-8),
           "bound");
  run.less("inscribed polygon length vs boundary length (disk)", pd.bound, kTwoPi, "analytic");
  auto wd = width_report(d, pd.sweepout, 0.1);
  run.at_most("disk sweepout max mass vs polygon length", wd.max_mass, pd.bound, 1e-9, "bound");

  const double phi1 = run.param("colatitude", kPi / 3);
  const int nc = run.iparam("n_cap", 16);
  Surface cap = Surface::spherical_cap(1.0, phi1);
  auto pc = inscribed_polygon_sweepout(cap, nc, frames);
  double side = std::acos(std::cos(phi1) * std::cos(phi1) + std::sin(phi1) * std::sin(phi1) * std::cos(kTwoPi / nc));
  run.near("inscribed polygon length on the cap (great-circle chords)", pc.bound, nc * side, 1e-9, "bound");
  run.less("inscribed polygon length vs boundary length (cap)", pc.bound, cap.boundary_length(), "analytic");
  run.greater("boundary length minus polygon length (cap)", pc.gap(), 0.0, "analytic");
  auto wc = width_report(cap, pc.sweepout, 0.1);
  run.at_most("cap sweepout max mass vs polygon length", wc.max_mass, pc.bound, 1e-9, "bound");
  run.note("cap gap " + fmt(pc.gap(), 12));

  run.artifact("widths.csv", width_csv_header() + width_csv_row(pd.sweepout.construction, wd, 0.1, d.descriptor()) +
                                 width_csv_row(pc.sweepout.construction, wc, 0.1, cap.descriptor()));
  run.svg("disk_sweepout.svg", render_svg(d, thin(pd.sweepout, 64)));
  run.svg("cap_sweepout.svg", render_svg(cap, thin(pc.sweepout, 64)));
}

// Twice the meridian length, integrating sqrt(g_nn) in the native coordinate.
// On the round part sqrt(g_nn) ~ 1/sqrt(2u) near the apex; u = v^2 removes that.
double meridian_by_quadrature(const RotationalProfile& P) {
  const double n1 = P.native_of_s(P.s_boundary);
  auto e = [&](double n) { return std::sqrt(P.e_native(n)); };
  if (P.sphere) return 2 * integrate_adaptive(e, 0.0, n1, 1e-13);
  const double ub = std::min(P.u_blend, n1);
  double head = integrate_adaptive([&](double v) { return 2 * v * e(v * v); }, 0.0, std::sqrt(ub), 1e-13);
  double tail = n1 > ub ? integrate_adaptive(e, ub, n1, 1e-13) : 0.0;
  return 2 * (head + tail);
}

void revolution_loop(Run& run) {
  const double rc = run.param("cap_radius", 1.0), a = run.param("slope", 0.2), rb = run.param("boundary_radius", 1.5);
  Surface s = Surface::revolution_with_boundary_radius(rc, a, rb);
  const auto& P = s.profile();
  const double circle = kTwoPi * rb;

  auto phi = rotational_sweepout(s, run.iparam("frames", 256));
  auto w = width_report(s, phi, run.param("r", 0.1));
  run.near("rotational sweepout max mass", w.max_mass, circle, run.tol("sweepout", 1e-8), "analytic");

  double quad = meridian_by_quadrature(P);
  auto meridian = find_free_boundary_geodesic(s, 0.0, kPi / 2);
  run.near("meridian geodesic length vs quadrature", meridian.length, quad, run.tol("meridian", 1e-6), "bound");
  run.greater("meridian length vs 2 pi r(u1)", quad, circle, "bound");

  auto loop = find_boundary_geodesic_loop(s, 0.0);
  run.near("loop equal-angle residual", std::abs(loop.angle_start - loop.angle_end), 0.0, run.tol("loop", 1e-6),
           "analytic");
  run.at_most("loop length vs 2 pi r(u1)", loop.path.length, circle, 0.0, "bound");
  // unrolled cone: apex angle 2 pi sin(alpha), slant radius r / sin(alpha) at the boundary
  double sin_alpha = P.tail_rate, R = rb / sin_alpha;
  double psi = kPi * sin_alpha;
  run.near("loop length vs unrolled cone chord", loop.path.length, 2 * R * std::sin(psi), run.tol("loop_length", 1e-6),
           "bound");
  run.note("loop vertex angle " + fmt(loop.launch_angle, 12) + ", length " + fmt(loop.path.length, 12));
  run.note("meridian " + fmt(quad, 12) + " vs 2 pi r(u1) " + fmt(circle, 12));

  const double big = run.param("large_boundary_radius", 3.0);
  if (big > 0) {
    Surface t = Surface::revolution_with_boundary_radius(rc, a, big);
    double q = meridian_by_quadrature(t.profile());
    run.note("with r(u1) = " + fmt(big) + ": meridian " + fmt(q, 12) + " vs 2 pi r(u1) " + fmt(kTwoPi * big, 12) +
             (q > kTwoPi * big ? " (meridian longer)" : " (meridian shorter)"));
  }

  GeodesicNetwork net;
  net.add(loop.path);
  run.artifact("loop_network.json", network_json(net).dump() + "\n");
  run.artifact("widths.csv", width_csv_header() + width_csv_row(phi.construction, w, run.param("r", 0.1), s.descriptor()));
  run.svg("loop.svg", render_svg(s, net));
  run.svg("sweepout.svg", render_svg(s, thin(phi, 32)));
}

std::vector<std::pair<std::string, Surface>> catalog() {
  return {{"disk", Surface::disk()},
          {"triangle", Surface::equilateral_triangle(1.0, 0.1)},
          {"sector", Surface::rounded_sector(1.0, 2 * kPi / 5, 0.1)},
          {"cap", Surface::spherical_cap(1.0, kPi / 3)},
          {"revolution", Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5)}};
}

void shortening_properties(Run& run) {
  const int count = run.iparam("count", 200);
  const int frames = run.iparam("homotopy_frames", 32);
  std::mt19937_64 rng(run.seed());
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (auto& [name, s] : catalog()) {
    const double T = s.boundary_length();
    int violations = 0, collapsed = 0, fixed = 0, stalled = 0;
    double excess = -1e300, ortho = 0.0;
    for (int i = 0; i < count; ++i) {
      Vec2 a = s.boundary_eval(T * U(rng)).point, b = s.boundary_eval(T * U(rng)).point;
      int k = int(U(rng) * 3);
      std::vector<Vec2> pts{a};
      for (int j = 1; j <= k; ++j) {
        Vec2 base = a + (b - a) * (double(j) / (k + 1));
        pts.push_back(s.center() + (base - s.center()) * U(rng));
      }
      pts.push_back(b);
      double raw = make_broken_geodesic(s, pts, 8, false).total_length;
      auto sigma = project_to_lambda(s, pts, default_segment_count(s, raw));
      auto out = shorten_run(s, sigma);
      for (size_t j = 1; j < out.lengths.size(); ++j)
        if (out.lengths[j] > out.lengths[j - 1] + 1e-12) ++violations;
      if (out.kind == OutcomeKind::Collapsed) {
        ++collapsed;
        for (const auto& f : homotopy_extract(s, out, frames)) excess = std::max(excess, f.length - sigma.total_length);
      } else if (out.kind == OutcomeKind::MaxIterations) {
        ++stalled;
      } else {
        ++fixed;
        ortho = std::max(ortho, out.residuals.orthogonality);
      }
    }
    // random curves essentially never settle on a free boundary geodesic, so one run starts on one
    double seed_s = name == "triangle" ? T / 6 : name == "sector" ? s.project_to_boundary(unit_from_angle(kPi / 5)).s : 0.0;
    auto fbg = find_free_boundary_geodesic(s, seed_s, kPi / 2);
    auto still = shorten_run(s, project_to_lambda(s, fbg.samples, default_segment_count(s, fbg.length)));
    for (size_t j = 1; j < still.lengths.size(); ++j)
      if (still.lengths[j] > still.lengths[j - 1] + 1e-12) ++violations;
    run.holds(name + ": free boundary geodesic start is a fixed outcome",
              still.kind == OutcomeKind::FixedFreeBoundaryGeodesic, "analytic");
    if (still.kind != OutcomeKind::Collapsed && still.kind != OutcomeKind::MaxIterations) {
      ++fixed;
      ortho = std::max(ortho, still.residuals.orthogonality);
    }
    run.near(name + ": length increases above 1e-12", violations, 0.0, 0.0, "analytic");
    if (collapsed) run.at_most(name + ": homotopy max length minus initial", excess, 0.0, 1e-9, "analytic");
    if (fixed) run.at_most(name + ": orthogonality residual of fixed outcomes", ortho, 0.0, 1e-6, "analytic");
    run.near(name + ": runs stopped without an outcome", stalled, 0.0, 0.0, "sanity");
    run.note(name + ": " + std::to_string(collapsed) + " collapsed, " + std::to_string(fixed) + " fixed, " +
             std::to_string(stalled) + " stalled");
  }
}

void network_audits(Run& run) {
  Surface d = Surface::disk();
  Surface rev = Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5);
  auto diam = [&](std::vector<double> angles, int mult) {
    GeodesicNetwork n;
    for (double a : angles) n.add(connect(d, -unit_from_angle(a), unit_from_angle(a)), mult);
    return n;
  };
  GeodesicNetwork y;
  for (int k = 0; k < 3; ++k) y.add(connect(d, {0, 0}, unit_from_angle(kPi / 2 + kTwoPi * k / 3)));
  GeodesicNetwork loop;
  loop.add(find_boundary_geodesic_loop(rev, 0.0).path);

  struct Case {
    std::string name;
    const Surface* surface;
    GeodesicNetwork net;
  };
  std::vector<Case> cases{{"Y-network", &d, y},
                          {"diameter", &d, diam({0.0}, 1)},
                          {"double diameter", &d, diam({0.0}, 2)},
                          {"crossed diameters", &d, diam({0.0, kPi / 2}, 1)},
                          {"revolution loop", &rev, loop}};
  const double tol = run.tol("stationarity", 1e-8);
  Json all = Json::object();
  for (auto& c : cases) {
    const Surface& S = *c.surface;
    bool stationary = true;
    double worst = 0.0;
    for (const auto& j : check_stationarity(S, c.net, tol)) {
      stationary = stationary && j.pass;
      worst = std::max(worst, j.residual);
    }
    run.holds(c.name + ": stationary at " + fmt(tol), stationary, "analytic");
    auto sub = build_subdivision(S, c.net);
    double gb = 0.0;
    bool disks = true;
    for (const auto& f : sub.faces) {
      gb = std::max(gb, gauss_bonnet_audit(S, f));
      disks = disks && f.euler_char == 1;
    }
    run.at_most(c.name + ": worst Gauss-Bonnet residual", gb, 0.0, run.tol("gauss_bonnet", 1e-4), "analytic");
    run.holds(c.name + ": every face has Euler characteristic 1", disks, "analytic");

    bool all_odd = true;
    for (const auto& s : c.net.segments) all_odd = all_odd && s.multiplicity == 1;
    auto hyp = check_hypotheses(S, c.net);
    if (hyp.integer_density) {
      auto dec = parity_decomposition(sub);
      run.holds(c.name + ": parity identity", parity_identity_holds(sub, dec), "analytic");
      if (all_odd && hyp.all()) {
        auto fb = faces_sweepout_bound(S, c.net, sub, dec);
        run.near(c.name + ": face concatenation bound vs mass", fb.bound, mass(c.net), 1e-9, "bound");
      } else if (all_odd) {
        run.note(c.name + ": face bound skipped, " + (hyp.violations.empty() ? std::string("hypotheses fail")
                                                                                : hyp.violations.front()));
      }
    } else {
      // a junction of non-integer density admits no two-coloring of the faces
      bool raised = false;
      try {
        parity_decomposition(sub);
      } catch (const Error& e) {
        raised = e.code() == ErrorCode::ParityInconsistency;
      }
      run.holds(c.name + ": parity check rejects the non-integer junction", raised, "bound");
    }
    all[c.name] = network_report_json(S, c.net, tol);
    std::string file = c.name;
    for (char& ch : file)
      if (ch == ' ' || ch == '-') ch = '_';
    run.svg(file + ".svg", render_svg(S, c.net));
  }
  run.artifact("networks.json", all.dump(1) + "\n");
}

using ScenarioFn = void (*)(Run&);

const std::vector<std::pair<std::string, ScenarioFn>>& registry() {
  static const std::vector<std::pair<std::string, ScenarioFn>> r{
      {"disk_widths", disk_widths},           {"second_variation", second_variation},
      {"sector_ls", sector_ls},               {"triangle_height", triangle_height},
      {"boundary_inequality", boundary_inequality}, {"revolution_loop", revolution_loop},
      {"shortening_properties", shortening_properties}, {"network_audits", network_audits}};
  return r;
}

}  // namespace

bool ScenarioReport::passed() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, f] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

std::string resolve_output_dir(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("GEONET_OUT"); env && *env) return env;
  return "geonet_out";
}

ScenarioConfig config_from_json(const std::string& name, const Json& j) {
  ScenarioConfig c;
  c.name = name;
  if (j.is_null()) return c;
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      if (!value.is_string()) throw Error(ErrorCode::ConfigInvalid, "name must be a string");
      if (c.name.empty()) c.name = value.get<std::string>();
      else if (value.get<std::string>() != c.name) throw Error(ErrorCode::ConfigInvalid, "config is for scenario " + value.get<std::string>());
    } else if (key == "surface") {
      c.surface = value;
    } else if (key == "parameters") {
      if (!value.is_object()) throw Error(ErrorCode::ConfigInvalid, "parameters must be an object");
      c.parameters = value;
    } else if (key == "tolerances") {
      if (!value.is_object()) throw Error(ErrorCode::ConfigInvalid, "tolerances must be an object");
      for (const auto& [k, v] : value.items()) {
        if (!v.is_number() || !(v.get<double>() > 0)) throw Error(ErrorCode::ConfigInvalid, "tolerance '" + k + "' must be positive");
        c.tolerances[k] = v.get<double>();
      }
    } else if (key == "output_dir") {
      c.output_dir = value.get<std::string>();
    } else if (key == "svg") {
      c.svg = value.get<bool>();
    } else if (key == "seed") {
      c.seed = value.get<std::uint64_t>();
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
    }
  }
  return c;
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
  ScenarioFn fn = nullptr;
  for (const auto& [k, f] : registry())
    if (k == config.name) fn = f;
  if (!fn) throw Error(ErrorCode::UnknownScenario, "no scenario named '" + config.name + "'");
  for (const auto& [k, v] : config.tolerances)
    if (!(v > 0)) throw Error(ErrorCode::ConfigInvalid, "tolerance '" + k + "' must be positive");

  const std::string dir = resolve_output_dir(config.output_dir) + "/" + config.name;
  Run run(config, dir);
  fn(run);
  ScenarioReport rep = run.report;
  std::string json_path = dir + "/report.json", csv_path = dir + "/report.csv";
  rep.artifacts.push_back(json_path);
  rep.artifacts.push_back(csv_path);
  write_text(json_path, report_json(rep).dump(1) + "\n");
  write_text(csv_path, report_csv(rep));
  return rep;
}

std::string report_csv(const ScenarioReport& r) {
  std::string s = "quantity,computed,expected,tolerance,relation,basis,pass\n";
  for (const auto& row : r.rows)
    s += "\"" + row.quantity + "\"," + fmt(row.computed, 12) + "," + fmt(row.expected, 12) + "," + fmt(row.tolerance, 3) +
         "," + relation_name(row.relation) + "," + row.basis + "," + (row.pass ? "pass" : "fail") + "\n";
  return s;
}

Json report_json(const ScenarioReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"quantity", row.quantity},
                    {"computed", row.computed},
                    {"expected", row.expected},
                    {"tolerance", row.tolerance},
                    {"relation", relation_name(row.relation)},
                    {"basis", row.basis},
                    {"pass", row.pass}});
  std::vector<std::string> files;
  for (const auto& a : r.artifacts) files.push_back(std::filesystem::path(a).filename().string());
  return {{"name", r.name}, {"passed", r.passed()}, {"rows", rows}, {"notes", r.notes}, {"artifacts", files}};
}

std::string report_table(const ScenarioReport& r) {
  std::ostringstream o;
  o << r.name << (r.passed() ? "  PASS" : "  FAIL") << "\n";
  for (const auto& row : r.rows) {
    o << "  " << (row.pass ? "ok  " : "FAIL") << "  " << row.quantity << ": " << fmt(row.computed, 12) << " "
      << relation_name(row.relation) << " " << fmt(row.expected, 12);
    if (row.tolerance > 0) o << " (tol " << fmt(row.tolerance, 3) << ")";
    o << " [" << row.basis << "]\n";
  }
  for (const auto& n : r.notes) o << "  note: " << n << "\n";
  return o.str();
}

}  // namespace geonet
