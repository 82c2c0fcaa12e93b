#include "geonet/sweepout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geonet {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Maximizer of a unimodal function on [a, b].
template <class F>
double golden_max(F f, double a, double b, double tol) {
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - kGolden * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kGolden * (b - a); fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  // the bracket ends are not evaluated by the loop; kinks at an end (sector apex) need them
  double best = x, fb = f(x);
  for (double y : {a, b, c, d}) {
    double fy = f(y);
    if (fy > fb) { fb = fy; best = y; }
  }
  return best;
}

void support(const FlatDomain& D, Vec2 n, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  auto take = [&](double v) { lo = std::min(lo, v); hi = std::max(hi, v); };
  for (const auto& p : D.pieces) {
    take(dot(p.point(0.0), n));
    take(dot(p.point(p.length), n));
    if (p.type == BoundaryPiece::Type::Arc)
      for (double sgn : {1.0, -1.0}) {
        double rel = wrap_period(angle_of(n * sgn) - p.angle0, kTwoPi);
        if (rel <= p.sweep) take(dot(p.center, n) + sgn * p.radius);
      }
  }
}

struct Chord {
  double length = 0.0;
  Vec2 p, q;
};

Chord chord_at(const FlatDomain& D, Vec2 d, Vec2 n, double tau) {
  Vec2 o = n * tau;
  auto h = D.line_hits(o, d);
  Chord c;
  if (h.size() < 2) return c;
  c.p = o + d * h.front().t;
  c.q = o + d * h.back().t;
  c.length = h.back().t - h.front().t;
  return c;
}

double longest_chord_offset(const FlatDomain& D, Vec2 d, Vec2 n, double lo, double hi) {
  // chord length is concave in the offset for a convex domain
  return golden_max([&](double tau) { return chord_at(D, d, n, tau).length; }, lo, hi, 1e-13 * (1.0 + hi - lo));
}

struct PieceData {
  Vec2 a, delta;
  double length = 0.0;
  bool on_boundary = false;
};

std::vector<PieceData> pieces_of(const Surface& S, const Curve& c) {
  std::vector<PieceData> out;
  const auto& x = c.samples;
  if (x.size() < 2) return out;
  const size_t m = c.closed ? x.size() : x.size() - 1;
  for (size_t i = 0; i < m; ++i) {
    Vec2 a = x[i], b = x[(i + 1) % x.size()];
    PieceData p;
    p.a = a;
    p.delta = b - a;
    Vec2 mid = (a + b) * 0.5;
    p.length = S.speed(mid, p.delta);
    p.on_boundary = std::abs(S.boundary_function(a)) < 1e-9 && std::abs(S.boundary_function(b)) < 1e-9 &&
                    std::abs(S.boundary_function(mid)) < 1e-9;
    out.push_back(p);
  }
  return out;
}

// Ball membership uses the metric frozen at the center: exact on flat domains, first order otherwise.
double in_ball(const std::vector<PieceData>& pieces, Vec2 p, const Sym2& g, double r) {
  double total = 0.0;
  for (const auto& s : pieces) {
    if (s.on_boundary) continue;
    Vec2 w = s.a - p;
    double A = g.inner(s.delta, s.delta);
    if (A <= 0.0) continue;
    double B = 2.0 * g.inner(w, s.delta), C = g.inner(w, w) - r * r;
    double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) continue;
    double sq = std::sqrt(disc);
    double t1 = std::max(0.0, (-B - sq) / (2.0 * A)), t2 = std::min(1.0, (-B + sq) / (2.0 * A));
    if (t2 > t1) total += (t2 - t1) * s.length;
  }
  return total;
}

void chart_box(const Surface& S, Vec2& lo, Vec2& hi) {
  if (S.is_flat()) {
    support(S.flat_domain(), {1, 0}, lo.x, hi.x);
    support(S.flat_domain(), {0, 1}, lo.y, hi.y);
  } else {
    double R = S.profile().s_boundary;
    lo = {-R, -R};
    hi = {R, R};
  }
}

Curve point_curve(Vec2 p) {
  Curve c;
  c.samples = {p};
  return c;
}

}  // namespace

double Cycle::mass() const {
  double m = 0.0;
  for (const auto& c : curves) m += c.length;
  return m;
}

double relative_mass(const Surface& surface, const Cycle& cycle) {
  double m = 0.0;
  for (const auto& c : cycle.curves) {
    bool inside = false;
    for (Vec2 x : c.samples)
      if (std::abs(surface.boundary_function(x)) > 1e-9) inside = true;
    if (inside) m += c.length;
  }
  return m;
}

double length_in_ball(const Surface& surface, const Curve& curve, Vec2 p, double r) {
  return in_ball(pieces_of(surface, curve), p, surface.metric(p), r);
}

WidthReport width_report(const Surface& surface, const Sweepout& phi, double r) {
  WidthReport rep;
  if (phi.frames.empty()) return rep;
  for (size_t k = 0; k < phi.frames.size(); ++k) {
    double m = phi.frames[k].cycle.mass();
    if (rep.argmax < 0 || m > rep.max_mass) {
      rep.max_mass = m;
      rep.argmax = int(k);
    }
  }

  constexpr int kGrid = 64;
  Vec2 lo, hi;
  chart_box(surface, lo, hi);
  std::vector<Vec2> grid;
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) {
      Vec2 p{lo.x + (hi.x - lo.x) * i / (kGrid - 1), lo.y + (hi.y - lo.y) * j / (kGrid - 1)};
      if (surface.contains(p, 0.0)) grid.push_back(p);
    }
  std::vector<Sym2> grid_metric;
  for (Vec2 p : grid) grid_metric.push_back(surface.metric(p));

  for (const auto& f : phi.frames) {
    std::vector<PieceData> pieces;
    std::vector<Vec2> own;
    for (const auto& c : f.cycle.curves) {
      auto p = pieces_of(surface, c);
      pieces.insert(pieces.end(), p.begin(), p.end());
      own.insert(own.end(), c.samples.begin(), c.samples.end());
    }
    if (pieces.empty()) continue;
    for (size_t i = 0; i < grid.size(); ++i)
      rep.concentration = std::max(rep.concentration, in_ball(pieces, grid[i], grid_metric[i], r));
    for (Vec2 p : own) rep.concentration = std::max(rep.concentration, in_ball(pieces, p, surface.metric(p), r));
  }
  return rep;
}

Sweepout parallel_sweepout(const Surface& surface, Vec2 direction, int n_frames) {
  if (!surface.is_flat()) throw Error(ErrorCode::NotFlat, "parallel sweepouts need a flat domain");
  if (n_frames < 2) throw Error(ErrorCode::ConfigInvalid, "need at least two frames");
  if (!(norm(direction) > 0)) throw Error(ErrorCode::ConfigInvalid, "direction must be nonzero");
  const FlatDomain& D = surface.flat_domain();
  Vec2 d = direction / norm(direction), n = perp(d);
  double lo, hi;
  support(D, n, lo, hi);

  std::vector<double> taus;
  for (int k = 0; k < n_frames; ++k) taus.push_back(lo + (hi - lo) * k / (n_frames - 1));
  double best = longest_chord_offset(D, d, n, lo, hi);
  auto it = std::lower_bound(taus.begin(), taus.end(), best);
  bool present = (it != taus.end() && *it - best < 1e-15) || (it != taus.begin() && best - *(it - 1) < 1e-15);
  if (!present) taus.insert(it, best);

  Sweepout out;
  out.construction = "parallel";
  for (size_t k = 0; k < taus.size(); ++k) {
    SweepFrame f;
    f.t = (taus[k] - lo) / (hi - lo);
    // the support lines give empty frames even when they contain a straight edge
    if (k > 0 && k + 1 < taus.size()) {
      Chord c = chord_at(D, d, n, taus[k]);
      if (c.length > 0) {
        Curve cv;
        cv.samples = {c.p, c.q};
        cv.length = c.length;
        f.cycle.curves.push_back(cv);
      }
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

double max_chord(const Surface& surface, double angle) {
  if (!surface.is_flat()) throw Error(ErrorCode::NotFlat, "chords are only computed on flat domains");
  const FlatDomain& D = surface.flat_domain();
  Vec2 d = unit_from_angle(angle), n = perp(d);
  double lo, hi;
  support(D, n, lo, hi);
  return chord_at(D, d, n, longest_chord_offset(D, d, n, lo, hi)).length;
}

DirectionSearch min_max_chord_direction(const Surface& surface, int coarse) {
  if (coarse < 3) throw Error(ErrorCode::ConfigInvalid, "coarse scan needs at least 3 directions");
  int jb = 0;
  double vb = std::numeric_limits<double>::infinity();
  for (int j = 0; j < coarse; ++j) {
    double v = max_chord(surface, kPi * j / coarse);
    if (v < vb) { vb = v; jb = j; }
  }
  const double h = kPi / coarse;
  double a = kPi * jb / coarse - h, b = kPi * jb / coarse + h;
  double x = golden_max([&](double phi) { return -max_chord(surface, phi); }, a, b, 1e-11);
  DirectionSearch r;
  r.angle = wrap_period(x, kPi);
  r.max_chord = max_chord(surface, x);
  if (vb < r.max_chord) {
    r.angle = kPi * jb / coarse;
    r.max_chord = vb;
  }
  return r;
}

double extrapolate_linear(const std::vector<double>& h, const std::vector<double>& v) {
  if (h.size() != v.size() || h.size() < 2) throw Error(ErrorCode::ConfigInvalid, "need at least two samples");
  double n = double(h.size()), sh = 0, sv = 0, shh = 0, shv = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    sh += h[i]; sv += v[i]; shh += h[i] * h[i]; shv += h[i] * v[i];
  }
  double den = n * shh - sh * sh;
  if (den == 0.0) throw Error(ErrorCode::ConfigInvalid, "sample abscissae coincide");
  double slope = (n * shv - sh * sv) / den;
  return (sv - slope * sh) / n;
}

Sweepout rotational_sweepout(const Surface& surface, int n_frames, int circle_samples) {
  if (surface.is_flat()) throw Error(ErrorCode::WrongSurfaceKind, "rotational sweepouts need a rotational surface");
  if (n_frames < 2 || circle_samples < 3) throw Error(ErrorCode::ConfigInvalid, "too few frames or samples");
  const auto& P = surface.profile();
  const double u1 = P.native_of_s(P.s_boundary);
  Sweepout out;
  out.construction = "rotational";
  for (int k = 0; k < n_frames; ++k) {
    SweepFrame f;
    f.t = double(k) / (n_frames - 1);
    if (k + 1 == n_frames) {
      f.cycle.curves.push_back(point_curve({0.0, 0.0}));
    } else {
      double s = k == 0 ? P.s_boundary : P.s_of_native(u1 * (1.0 - f.t));
      Curve c;
      c.closed = true;
      for (int j = 0; j < circle_samples; ++j) c.samples.push_back(unit_from_angle(kTwoPi * j / circle_samples) * s);
      c.length = kTwoPi * P.r(s);
      f.cycle.curves.push_back(std::move(c));
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

FacesBound faces_sweepout_bound(const Surface& surface, const GeodesicNetwork& net, const Subdivision& sub,
                                const ParityDecomposition& dec) {
  auto hyp = check_hypotheses(surface, net);
  if (!hyp.all()) {
    std::string why = hyp.violations.empty() ? "hypotheses fail" : hyp.violations.front();
    throw Error(ErrorCode::PreconditionUnverified, why);
  }
  if (dec.color.size() != sub.faces.size())
    throw Error(ErrorCode::PreconditionUnverified, "decomposition does not match the subdivision");
  FacesBound fb;
  for (const auto& e : sub.edges) {
    if (e.on_boundary) continue;
    if (e.multiplicity % 2 == 1) fb.odd += e.length;
    else if (dec.color[e.left_face] == 0) fb.even_I += e.length;
    else fb.even_J += e.length;
  }
  fb.bound = std::max(fb.odd + 2 * fb.even_I, fb.odd + 2 * fb.even_J);
  return fb;
}

FacesBound faces_sweepout_bound(const Surface& surface, const GeodesicNetwork& net) {
  auto hyp = check_hypotheses(surface, net);
  if (!hyp.all()) {
    std::string why = hyp.violations.empty() ? "hypotheses fail" : hyp.violations.front();
    throw Error(ErrorCode::PreconditionUnverified, why);
  }
  auto sub = build_subdivision(surface, net);
  return faces_sweepout_bound(surface, net, sub, parity_decomposition(sub));
}

InscribedPolygon inscribed_polygon_sweepout(const Surface& surface, int n, int n_frames) {
  if (n < 3) throw Error(ErrorCode::ConfigInvalid, "need at least three boundary points");
  if (n_frames < 4) throw Error(ErrorCode::ConfigInvalid, "need at least four frames");
  const double T = surface.boundary_length();
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back(surface.boundary_eval(T * i / n).point);

  InscribedPolygon out;
  out.boundary_length = T;
  // sides must stay inside convex balls: any length on a flat domain, pi / (2 sqrt(K_max)) otherwise
  const double K = surface.max_curvature();
  const double reach = K > 0 ? kPi / (2 * std::sqrt(K)) : std::numeric_limits<double>::infinity();
  out.polygon = make_broken_geodesic(surface, pts, n, true);
  double longest = 0.0;
  for (const auto& s : out.polygon.segments) longest = std::max(longest, s.length);
  if (longest >= reach)
    throw Error(ErrorCode::NUnreachable, "side of length " + std::to_string(longest) + " leaves a convex ball");
  out.bound = out.polygon.total_length;
  // lattice fine enough for the shortening map; the extra lattice points sit on the sides
  out.polygon.L = n * std::max(1, int(std::ceil(longest / lambda_epsilon(surface))));

  const int half = n_frames / 2;
  std::vector<std::vector<Curve>> lunes;
  for (const auto& seg : out.polygon.segments) {
    auto line = sample_segment(surface, seg).samples;
    auto sigma = project_to_lambda(surface, line, default_segment_count(surface, seg.length));
    auto run = shorten_run(surface, sigma);
    lunes.push_back(homotopy_extract(surface, run, half));
  }
  auto inner = shorten_run(surface, out.polygon);
  auto inner_frames = homotopy_extract(surface, inner, half);

  out.sweepout.construction = "inscribed_polygon";
  const int total = 2 * half;
  for (int j = 0; j < half; ++j) {
    SweepFrame f;
    f.t = double(j) / (total - 1);
    for (const auto& l : lunes) f.cycle.curves.push_back(l[half - 1 - j]);
    out.sweepout.frames.push_back(std::move(f));
  }
  for (int j = 0; j < half; ++j) {
    SweepFrame f;
    f.t = double(half + j) / (total - 1);
    f.cycle.curves.push_back(inner_frames[j]);
    out.sweepout.frames.push_back(std::move(f));
  }
  return out;
}

double ls_lower_bound(const std::vector<double>& widths) {
  double s = 0.0;
  for (double w : widths) s += w;
  return s;
}

}  // namespace geonet
