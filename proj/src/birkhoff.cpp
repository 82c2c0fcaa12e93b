#include "geonet/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geonet {

namespace {

Segment reversed(const Segment& s) {
  Segment r = s;
  std::swap(r.a, r.b);
  r.velocity = -s.end_velocity;
  r.end_velocity = -s.velocity;
  return r;
}

// Midpoint by re-shooting to half length.
Vec2 midpoint(const Surface& S, const Segment& seg) { return segment_point(S, seg, 0.5 * seg.length); }

double sum_lengths(const std::vector<Segment>& segs) {
  double acc = 0.0;
  for (const auto& s : segs) acc += s.length;
  return acc;
}

BrokenGeodesic assemble(std::vector<Vec2> breaks, std::vector<Segment> segs, const BrokenGeodesic& like) {
  BrokenGeodesic out;
  out.L = like.L;
  out.closed = like.closed;
  out.endpoints_on_boundary = like.closed ? false : true;
  out.breaks = std::move(breaks);
  out.segments = std::move(segs);
  out.total_length = sum_lengths(out.segments);
  out.lipschitz_bound = like.lipschitz_bound;
  return out;
}

}  // namespace

std::vector<Vec2> BrokenGeodesic::vertices(const Surface& surface) const {
  const int n = 2 * L;
  const int count = closed ? n : n + 1;
  std::vector<Vec2> out;
  out.reserve(count);
  if (segments.empty() || total_length == 0.0) {
    out.assign(count, breaks.empty() ? Vec2{} : breaks.front());
    return out;
  }
  size_t j = 0;
  double offset = 0.0;
  for (int k = 0; k < count; ++k) {
    double t = total_length * k / n;
    while (j + 1 < segments.size() && t > offset + segments[j].length) {
      offset += segments[j].length;
      ++j;
    }
    const Segment& s = segments[j];
    double local = std::clamp(t - offset, 0.0, s.length);
    if (local == 0.0) out.push_back(s.a);
    else if (local == s.length) out.push_back(s.b);
    else out.push_back(segment_point(surface, s, local));
  }
  if (!closed) out.back() = segments.back().b;
  return out;
}

Vec2 BrokenGeodesic::point_at(const Surface& surface, double t) const {
  if (segments.empty()) return breaks.front();
  double offset = 0.0;
  for (size_t j = 0; j < segments.size(); ++j) {
    if (t <= offset + segments[j].length || j + 1 == segments.size())
      return segment_point(surface, segments[j], std::clamp(t - offset, 0.0, segments[j].length));
    offset += segments[j].length;
  }
  return breaks.back();
}

Curve BrokenGeodesic::to_curve(const Surface& surface, double spacing) const {
  Curve c;
  c.closed = closed;
  c.length = total_length;
  SampleOptions opt;
  opt.spacing = spacing;
  for (const auto& s : segments) {
    auto p = sample_segment(surface, s, opt);
    size_t first = c.samples.empty() ? 0 : 1;
    c.samples.insert(c.samples.end(), p.samples.begin() + first, p.samples.end());
  }
  if (c.samples.empty() && !breaks.empty()) c.samples.push_back(breaks.front());
  if (closed && c.samples.size() > 1) c.samples.pop_back();
  return c;
}

BrokenGeodesic make_broken_geodesic(const Surface& surface, const std::vector<Vec2>& breaks, int L, bool closed) {
  if (breaks.empty()) throw Error(ErrorCode::ConfigInvalid, "broken geodesic needs at least one point");
  BrokenGeodesic g;
  g.L = L;
  g.closed = closed;
  g.breaks = breaks;
  const size_t n = breaks.size();
  const size_t m = closed ? (n > 1 ? n : 0) : n - 1;
  for (size_t i = 0; i < m; ++i) g.segments.push_back(connect_segment(surface, breaks[i], breaks[(i + 1) % n]));
  g.total_length = sum_lengths(g.segments);
  g.lipschitz_bound = g.total_length;
  g.endpoints_on_boundary = !closed && surface.project_to_boundary(breaks.front()).distance < 1e-8 &&
                            surface.project_to_boundary(breaks.back()).distance < 1e-8;
  return g;
}

// Distance along inward normals before they can focus: exact in a model space with K = kmax and
// boundary curvature kg, and K >= 0 only makes it shorter there.
double boundary_focal_distance(const Surface& surface) {
  double kg = 0.0;
  if (surface.is_flat()) {
    const auto& D = surface.flat_domain();
    if (D.shape != "disk" && D.rounding == 0.0)
      throw Error(ErrorCode::ConfigInvalid, "shortening needs rounded corners (rounding > 0)");
    for (const auto& p : D.pieces) kg = std::max(kg, p.curvature());
  } else {
    kg = surface.min_boundary_curvature();  // constant along a latitude
  }
  const double K = surface.max_curvature();
  if (K > 0.0) return std::atan2(std::sqrt(K), kg) / std::sqrt(K);
  return kg > 0.0 ? 1.0 / kg : std::numeric_limits<double>::infinity();
}

double lambda_epsilon(const Surface& surface) {
  double bound = std::min(surface.diameter(), boundary_focal_distance(surface));
  double kmax = surface.max_curvature();
  if (kmax > 0.0) bound = std::min(bound, kPi / std::sqrt(kmax));
  return 0.9 * bound;
}

int default_segment_count(const Surface& surface, double length) {
  return std::max(8, 2 * int(std::ceil(length / lambda_epsilon(surface))));
}

BrokenGeodesic project_to_lambda(const Surface& surface, const std::vector<Vec2>& polyline, int L, bool closed) {
  if (polyline.empty()) throw Error(ErrorCode::ConfigInvalid, "empty polyline");
  if (L < 2) throw Error(ErrorCode::ConfigInvalid, "segment count must be at least 2");
  for (const auto& p : polyline)
    if (!surface.contains(p)) throw Error(ErrorCode::PointOutsideDomain, "polyline point outside the domain");
  std::vector<Vec2> pts = polyline;
  if (!closed) {
    for (Vec2* end : {&pts.front(), &pts.back()}) {
      auto pr = surface.project_to_boundary(*end);
      if (pr.distance < 1e-6) *end = pr.foot;
    }
  }
  BrokenGeodesic raw = make_broken_geodesic(surface, pts, L, closed);
  const int count = closed ? L : L + 1;
  std::vector<Vec2> breaks;
  for (int k = 0; k < count; ++k) breaks.push_back(raw.point_at(surface, raw.total_length * k / L));
  if (!closed) breaks.back() = pts.back();
  BrokenGeodesic out = make_broken_geodesic(surface, breaks, L, closed);
  const double eps = lambda_epsilon(surface);
  for (const auto& s : out.segments)
    if (s.length > eps * (1 + 1e-12)) throw Error(ErrorCode::SegmentTooLong, "segment exceeds the admissible length; increase L");
  return out;
}

BrokenGeodesic shorten_step(const Surface& surface, const BrokenGeodesic& sigma, StepReport* report) {
  if (sigma.L < 2) throw Error(ErrorCode::ConfigInvalid, "segment count must be at least 2");
  const double eps = lambda_epsilon(surface);
  if (sigma.total_length / sigma.L > eps * (1 + 1e-12))
    throw Error(ErrorCode::SegmentTooLong, "lattice spacing exceeds the admissible length");
  const int L = sigma.L;
  std::vector<Vec2> x = sigma.vertices(surface);
  BrokenGeodesic next;

  if (!sigma.closed) {
    // stage 1: drops at both ends, shortest segments between even lattice points
    std::vector<Segment> segs;
    segs.push_back(reversed(drop_segment(surface, x[2])));
    for (int i = 1; i + 1 < L; ++i) segs.push_back(connect_segment(surface, x[2 * i], x[2 * i + 2]));
    segs.push_back(drop_segment(surface, x[2 * L - 2]));
    // stage 2: the same construction on the segment midpoints
    std::vector<Vec2> mids;
    for (const auto& s : segs) mids.push_back(midpoint(surface, s));
    std::vector<Segment> out;
    std::vector<Vec2> breaks;
    Segment first = reversed(drop_segment(surface, mids.front()));
    breaks.push_back(first.a);
    out.push_back(first);
    for (size_t i = 0; i + 1 < mids.size(); ++i) {
      breaks.push_back(mids[i]);
      out.push_back(connect_segment(surface, mids[i], mids[i + 1]));
    }
    breaks.push_back(mids.back());
    Segment last = drop_segment(surface, mids.back());
    breaks.push_back(last.b);
    out.push_back(last);
    next = assemble(std::move(breaks), std::move(out), sigma);
  } else {
    std::vector<Segment> segs;
    for (int i = 0; i < L; ++i) segs.push_back(connect_segment(surface, x[2 * i], x[(2 * i + 2) % (2 * L)]));
    std::vector<Vec2> mids;
    for (const auto& s : segs) mids.push_back(midpoint(surface, s));
    std::vector<Segment> out;
    for (int i = 0; i < L; ++i) out.push_back(connect_segment(surface, mids[i], mids[(i + 1) % L]));
    next = assemble(std::move(mids), std::move(out), sigma);
  }

  StepReport rep;
  rep.decrease = sigma.total_length - next.total_length;
  // A roundoff-level gain is not a genuine step: keep the input so lengths stay monotone.
  if (rep.decrease < 0.0 && -rep.decrease <= 1e-10 * (1.0 + sigma.total_length)) {
    rep.decrease = 0.0;
    rep.held = true;
    next = sigma;
  }
  if (report) *report = rep;
  return next;
}

CurveResiduals curve_residuals(const Surface& surface, const BrokenGeodesic& sigma) {
  CurveResiduals r;
  const auto& segs = sigma.segments;
  const size_t n = segs.size();
  auto turn = [&](const Segment& in, const Segment& out) {
    if (in.length == 0.0 || out.length == 0.0) return 0.0;
    Sym2 g = surface.metric(out.a);
    return std::acos(std::clamp(g.inner(in.end_velocity, out.velocity), -1.0, 1.0));
  };
  for (size_t i = 1; i < n; ++i) r.breaks = std::max(r.breaks, turn(segs[i - 1], segs[i]));
  if (sigma.closed && n > 1) r.breaks = std::max(r.breaks, turn(segs[n - 1], segs[0]));
  if (!sigma.closed && n > 0) {
    auto end_angle = [&](Vec2 p, Vec2 v) {
      auto pr = surface.project_to_boundary(p);
      if (pr.distance > 1e-8) return kPi / 2;
      return std::abs(angle_with_boundary(surface, pr.s, v) - kPi / 2);
    };
    r.orthogonality = std::max(end_angle(segs.front().a, segs.front().velocity), end_angle(segs.back().b, segs.back().end_velocity));
  }
  return r;
}

const char* outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::FixedFreeBoundaryGeodesic: return "FixedFreeBoundaryGeodesic";
    case OutcomeKind::FixedClosedGeodesic: return "FixedClosedGeodesic";
    case OutcomeKind::Collapsed: return "Collapsed";
    case OutcomeKind::MaxIterations: return "MaxIterations";
  }
  return "?";
}

ShorteningOutcome shorten_run(const Surface& surface, const BrokenGeodesic& sigma0, double tol, int max_iter) {
  if (tol <= 0.0) tol = 1e-4 * surface.diameter();
  ShorteningOutcome out;
  out.trajectory.push_back(sigma0);
  out.lengths.push_back(sigma0.total_length);
  auto collapsed = [&](const BrokenGeodesic& s) {
    if (s.total_length >= tol) return false;
    out.kind = OutcomeKind::Collapsed;
    out.collapse_point = s.point_at(surface, 0.5 * s.total_length);
    out.residuals = curve_residuals(surface, s);
    return true;
  };
  if (collapsed(sigma0)) return out;
  for (int it = 0; it < max_iter; ++it) {
    StepReport rep;
    BrokenGeodesic next = shorten_step(surface, out.trajectory.back(), &rep);
    out.iterations = it + 1;
    out.held_steps += rep.held ? 1 : 0;
    out.trajectory.push_back(next);
    out.lengths.push_back(next.total_length);
    if (collapsed(next)) return out;
    if (rep.decrease < 1e-12) {
      out.residuals = curve_residuals(surface, next);
      bool geodesic = out.residuals.breaks < 1e-6 && (next.closed || out.residuals.orthogonality < 1e-6);
      if (geodesic) {
        out.kind = next.closed ? OutcomeKind::FixedClosedGeodesic : OutcomeKind::FixedFreeBoundaryGeodesic;
        return out;
      }
      if (rep.held) break;  // stalled away from a geodesic
    }
  }
  out.kind = OutcomeKind::MaxIterations;
  out.residuals = curve_residuals(surface, out.trajectory.back());
  return out;
}

std::vector<Curve> homotopy_extract(const Surface& surface, const ShorteningOutcome& outcome, int n_frames) {
  if (outcome.kind != OutcomeKind::Collapsed) throw Error(ErrorCode::NotCollapsed, "homotopy needs a collapsed outcome");
  if (n_frames < 2) throw Error(ErrorCode::ConfigInvalid, "need at least two frames");
  const auto& traj = outcome.trajectory;
  const bool closed = traj.front().closed;
  const bool anchored = traj.front().endpoints_on_boundary;
  std::vector<std::vector<Vec2>> pts;
  for (const auto& s : traj) pts.push_back(s.vertices(surface));
  const double T = surface.boundary_length();
  const size_t N = traj.size() - 1;

  std::vector<Curve> frames;
  for (int j = 0; j + 1 < n_frames; ++j) {
    double u = n_frames > 2 ? double(N) * j / (n_frames - 2) : 0.0;
    size_t k = std::min(size_t(u), N == 0 ? 0 : N - 1);
    double f = N == 0 ? 0.0 : u - double(k);
    const auto& A = pts[k];
    const auto& B = pts[std::min(k + 1, N)];
    std::vector<Vec2> p(A.size());
    for (size_t i = 0; i < A.size(); ++i) p[i] = A[i] * (1 - f) + B[i] * f;
    if (anchored && !closed && f > 0.0) {
      for (size_t i : {size_t(0), A.size() - 1}) {
        double sa = surface.project_to_boundary(A[i]).s, sb = surface.project_to_boundary(B[i]).s;
        double ds = wrap_angle((sb - sa) / T * kTwoPi) / kTwoPi * T;
        p[i] = surface.boundary_eval(wrap_period(sa + f * ds, T)).point;
      }
    }
    Curve c;
    c.closed = closed;
    c.samples = p;
    const size_t m = closed ? p.size() : p.size() - 1;
    for (size_t i = 0; i < m; ++i) c.length += connect_segment(surface, p[i], p[(i + 1) % p.size()]).length;
    frames.push_back(std::move(c));
  }
  Curve last;
  last.closed = closed;
  last.samples = {outcome.collapse_point};
  frames.push_back(last);
  return frames;
}

}  // namespace geonet
