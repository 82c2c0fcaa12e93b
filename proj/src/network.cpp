#include "geonet/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <numeric>

#include "geonet/quadrature.hpp"

namespace geonet {

namespace {

double metric_angle(const Surface& S, Vec2 p, Vec2 a, Vec2 b) {
  Sym2 g = S.metric(p);
  return std::atan2(std::sqrt(g.det()) * cross(a, b), g.inner(a, b));
}

double shoelace(const std::vector<Vec2>& loop) {
  double a = 0.0;
  for (size_t i = 0; i < loop.size(); ++i) a += cross(loop[i], loop[(i + 1) % loop.size()]);
  return 0.5 * a;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  bool in = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

double dist_to_polyline(Vec2 p, const std::vector<Vec2>& poly, double* param = nullptr) {
  double best = norm(p - poly.front());
  if (param) *param = 0.0;
  for (size_t k = 0; k + 1 < poly.size(); ++k) {
    Vec2 d = poly[k + 1] - poly[k];
    double len2 = dot(d, d);
    double u = len2 > 0 ? std::clamp(dot(p - poly[k], d) / len2, 0.0, 1.0) : 0.0;
    double dd = norm(p - (poly[k] + d * u));
    if (dd < best) {
      best = dd;
      if (param) *param = double(k) + u;
    }
  }
  return best;
}

GeodesicState path_state(const Surface& S, const GeodesicPath& p, double t) {
  const int n = int(p.samples.size());
  const double h = p.spacing();
  if (n < 2 || h == 0.0) return {p.start, p.initial_velocity};
  int k = std::clamp(int(std::floor(t / h)), 0, n - 2);
  auto st = geodesic_flow(S, {p.samples[k], p.velocities[k]}, t - k * h);
  st.v = S.normalize(st.x, st.v);
  return st;
}

GeodesicPath piece(const Surface& S, Vec2 x0, Vec2 v0, double length, Vec2 x1, double spacing) {
  SampleOptions opt;
  opt.spacing = spacing > 0 ? spacing : 1e-2;
  GeodesicPath p = sample_geodesic(S, x0, S.normalize(x0, v0), length, opt);
  p.samples.back() = x1;
  return p;
}

bool near_endpoint(Vec2 x, const GeodesicPath& p, double tol) {
  return norm(x - p.start) < tol || norm(x - p.end()) < tol;
}

// Newton refinement of gamma_i(ti) = gamma_j(tj).
Vec2 refine_crossing(const Surface& S, const GeodesicPath& a, const GeodesicPath& b, double& ta, double& tb) {
  for (int it = 0; it < 30; ++it) {
    auto sa = path_state(S, a, ta), sb = path_state(S, b, tb);
    Vec2 r = sa.x - sb.x;
    if (norm(r) < 1e-15) break;
    double det = cross(sa.v, -sb.v);
    if (std::abs(det) < 1e-300) break;
    double da = cross(r, -sb.v) / det, db = cross(sa.v, r) / det;
    ta -= da;
    tb -= db;
  }
  return path_state(S, a, ta).x;
}

double project_onto_path(const Surface& S, const GeodesicPath& p, Vec2 x, double t) {
  for (int it = 0; it < 30; ++it) {
    auto st = path_state(S, p, t);
    double step = dot(st.x - x, st.v) / dot(st.v, st.v);
    t -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return t;
}

struct Cut {
  double t;
  Vec2 x;
};

// On a rotational chart the apex fan reduces a radial density w(s) to a line integral:
// the triangle (apex, A, B) carries the integral of G(|P|) dtheta along AB, where G(s) = int_0^s w r.
// Chords with both ends on the boundary circle stand for boundary arcs and are integrated exactly.
double radial_fan(const std::function<double(double)>& G, const std::vector<Vec2>& loop, double s_boundary) {
  double acc = 0.0;
  const double Gb = G(s_boundary);
  for (size_t i = 0; i < loop.size(); ++i) {
    Vec2 A = loop[i], E = loop[(i + 1) % loop.size()] - A;
    double c = cross(A, E);
    if (c == 0.0) continue;
    Vec2 B = A + E;
    if (std::abs(norm(A) - s_boundary) < 1e-12 * s_boundary && std::abs(norm(B) - s_boundary) < 1e-12 * s_boundary &&
        norm(E) < 0.1 * s_boundary) {
      acc += Gb * std::atan2(cross(A, B), dot(A, B));
      continue;
    }
    acc += integrate_adaptive(
        [&](double u) {
          Vec2 P = A + E * u;
          double q = dot(P, P);
          return q > 0.0 ? G(std::sqrt(q)) * c / q : 0.0;
        },
        0.0, 1.0, 1e-15 * (1.0 + std::abs(c)), 20);
  }
  return acc;
}

// int_0^s K r = 1 - r'(s)
double curvature_antiderivative(const RotationalProfile& pr, double s) {
  if (pr.sphere || s <= pr.s_blend) {
    double q = std::sin(0.5 * s / pr.rho);
    return 2.0 * q * q;
  }
  return 1.0 - pr.tail_rate;
}

double area_antiderivative(const RotationalProfile& pr, double s) {
  double c = std::min(s, pr.sphere ? s : pr.s_blend);
  double q = std::sin(0.5 * c / pr.rho);
  double a = 2.0 * pr.rho * pr.rho * q * q;
  if (!pr.sphere && s > pr.s_blend) {
    double l = s - pr.s_blend;
    a += pr.r_blend * l + 0.5 * pr.tail_rate * l * l;
  }
  return a;
}

}  // namespace

double mass(const GeodesicNetwork& net) {
  double m = 0.0;
  for (const auto& s : net.segments) m += s.multiplicity * s.path.length;
  return m;
}

const char* junction_class_name(JunctionClass c) {
  switch (c) {
    case JunctionClass::Regular: return "Regular";
    case JunctionClass::InteriorJunction: return "J_i";
    case JunctionClass::BoundaryJunction: return "J_b";
    case JunctionClass::BoundaryLoop: return "J_l";
    case JunctionClass::CrossingCandidate: return "CrossingCandidate";
    case JunctionClass::NonAdmissible: return "NonAdmissible";
  }
  return "?";
}

SplitNetwork register_crossings(const Surface& S, const GeodesicNetwork& net) {
  const auto& segs = net.segments;
  const size_t n = segs.size();
  for (const auto& s : segs) {
    if (s.multiplicity < 1) throw Error(ErrorCode::MalformedNetwork, "multiplicities must be positive");
    if (s.path.samples.empty()) throw Error(ErrorCode::MalformedNetwork, "segment without samples");
  }
  std::vector<std::vector<Cut>> cuts(n);
  SplitNetwork out;
  const double end_tol = 1e-7;

  // tangential overlaps
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      int run = 0, longest = 0;
      for (const auto& x : segs[i].path.samples) {
        run = dist_to_polyline(x, segs[j].path.samples) < 1e-9 ? run + 1 : 0;
        longest = std::max(longest, run);
      }
      if (longest > 10) throw Error(ErrorCode::NonManifoldIncidence, "segments overlap along a stretch; merge them with a multiplicity");
    }

  // transversal crossings
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const auto& A = segs[i].path;
      const auto& B = segs[j].path;
      const double ha = A.spacing(), hb = B.spacing();
      for (size_t a = 0; a + 1 < A.samples.size(); ++a) {
        Vec2 p0 = A.samples[a], p1 = A.samples[a + 1];
        for (size_t b = 0; b + 1 < B.samples.size(); ++b) {
          Vec2 q0 = B.samples[b], q1 = B.samples[b + 1];
          if (std::max(p0.x, p1.x) < std::min(q0.x, q1.x) || std::max(q0.x, q1.x) < std::min(p0.x, p1.x) ||
              std::max(p0.y, p1.y) < std::min(q0.y, q1.y) || std::max(q0.y, q1.y) < std::min(p0.y, p1.y))
            continue;
          Vec2 d1 = p1 - p0, d2 = q1 - q0;
          double den = cross(d1, d2);
          if (std::abs(den) < 1e-300) continue;
          double u = cross(q0 - p0, d2) / den, v = cross(q0 - p0, d1) / den;
          if (u < 0 || u > 1 || v < 0 || v > 1) continue;
          Vec2 X = p0 + d1 * u;
          if (near_endpoint(X, A, end_tol) || near_endpoint(X, B, end_tol)) continue;
          double ta = (a + u) * ha, tb = (b + v) * hb;
          X = refine_crossing(S, A, B, ta, tb);
          bool dup = false;
          for (const auto& c : cuts[i]) dup = dup || std::abs(c.t - ta) < 1e-9;
          if (dup) continue;
          cuts[i].push_back({ta, X});
          cuts[j].push_back({tb, X});
          out.crossings.push_back(X);
        }
      }
    }

  // endpoints resting on the interior of another segment
  for (size_t i = 0; i < n; ++i)
    for (Vec2 P : {segs[i].path.start, segs[i].path.end()})
      for (size_t j = 0; j < n; ++j) {
        if (i == j || near_endpoint(P, segs[j].path, end_tol)) continue;
        double param = 0.0;
        if (dist_to_polyline(P, segs[j].path.samples, &param) > 1e-6) continue;
        double t = project_onto_path(S, segs[j].path, P, param * segs[j].path.spacing());
        if (norm(path_state(S, segs[j].path, t).x - P) > kSnapTolerance) continue;
        bool dup = false;
        for (const auto& c : cuts[j]) dup = dup || std::abs(c.t - t) < 1e-9;
        if (!dup) cuts[j].push_back({t, P});
      }

  for (size_t i = 0; i < n; ++i) {
    const auto& P = segs[i].path;
    auto& c = cuts[i];
    std::sort(c.begin(), c.end(), [](const Cut& a, const Cut& b) { return a.t < b.t; });
    if (c.empty()) {
      out.network.segments.push_back(segs[i]);
      out.origin.push_back(int(i));
      continue;
    }
    double t0 = 0.0;
    Vec2 x0 = P.start, v0 = P.initial_velocity;
    for (size_t k = 0; k <= c.size(); ++k) {
      double t1 = k < c.size() ? c[k].t : P.length;
      Vec2 x1 = k < c.size() ? c[k].x : P.end();
      GeodesicPath part = piece(S, x0, v0, t1 - t0, x1, P.spacing());
      if (k == c.size()) part.velocities.back() = P.end_velocity();
      out.network.segments.push_back({part, segs[i].multiplicity});
      out.origin.push_back(int(i));
      if (k < c.size()) {
        t0 = t1;
        x0 = x1;
        v0 = path_state(S, P, t1).v;
      }
    }
  }
  return out;
}

namespace {

struct EndRef {
  int piece;
  bool at_start;
};

// Clusters piece endpoints into junction points.
std::vector<std::vector<EndRef>> cluster_ends(const GeodesicNetwork& net, std::vector<Vec2>& where) {
  std::vector<std::vector<EndRef>> groups;
  for (size_t i = 0; i < net.segments.size(); ++i)
    for (bool st : {true, false}) {
      Vec2 x = st ? net.segments[i].path.start : net.segments[i].path.end();
      size_t g = 0;
      for (; g < where.size(); ++g)
        if (norm(where[g] - x) < kSnapTolerance) break;
      if (g == where.size()) {
        where.push_back(x);
        groups.emplace_back();
      }
      groups[g].push_back({int(i), st});
    }
  return groups;
}

bool opposite(const Surface& S, Vec2 p, Vec2 a, Vec2 b) { return std::abs(std::abs(metric_angle(S, p, a, b)) - kPi) < 1e-6; }

bool pairs_into_opposites(const Surface& S, Vec2 p, const std::vector<Vec2>& d) {
  if (d.size() != 4) return false;
  for (int k = 1; k < 4; ++k) {
    std::vector<int> rest;
    for (int m = 1; m < 4; ++m)
      if (m != k) rest.push_back(m);
    if (opposite(S, p, d[0], d[k]) && opposite(S, p, d[rest[0]], d[rest[1]])) return true;
  }
  return false;
}

}  // namespace

std::vector<JunctionReport> check_stationarity(const Surface& S, const GeodesicNetwork& net, double tol) {
  SplitNetwork split = register_crossings(S, net);
  std::vector<Vec2> where;
  auto groups = cluster_ends(split.network, where);
  std::vector<JunctionReport> out;
  for (size_t g = 0; g < groups.size(); ++g) {
    JunctionReport r;
    r.location = where[g];
    auto pr = S.project_to_boundary(r.location);
    r.on_boundary = pr.distance < kSnapTolerance;
    r.boundary_s = pr.s;
    int count = 0;
    std::vector<Vec2> dirs;
    for (const auto& e : groups[g]) {
      const auto& seg = split.network.segments[e.piece];
      Vec2 d = e.at_start ? seg.path.initial_velocity : -seg.path.end_velocity();
      r.ends.push_back({split.origin[e.piece], e.at_start, d, seg.multiplicity});
      r.resultant = r.resultant + d * double(seg.multiplicity);
      count += seg.multiplicity;
      for (int m = 0; m < seg.multiplicity; ++m) dirs.push_back(d);
    }
    r.density = 0.5 * count;
    for (Vec2 c : split.crossings) r.crossing = r.crossing || norm(c - r.location) < kSnapTolerance;
    if (r.on_boundary) {
      auto fr = S.boundary_eval(pr.s);
      r.residual = std::abs(S.metric(r.location).inner(r.resultant, fr.tangent));
    } else {
      r.residual = S.speed(r.location, r.resultant);
      if (count == 1) throw Error(ErrorCode::MalformedNetwork, "dangling interior endpoint");
    }
    r.pass = r.residual < tol;
    if (r.on_boundary) {
      if (count >= 3) r.classification = JunctionClass::BoundaryJunction;
      else if (count == 2 && std::abs(metric_angle(S, r.location, dirs[0], dirs[1])) > 1e-6) r.classification = JunctionClass::BoundaryLoop;
      else r.classification = JunctionClass::Regular;
    } else {
      if (count >= 6) r.classification = JunctionClass::InteriorJunction;
      else if (count == 4 && pairs_into_opposites(S, r.location, dirs)) r.classification = JunctionClass::CrossingCandidate;
      else if (count == 2 && opposite(S, r.location, dirs[0], dirs[1])) r.classification = JunctionClass::Regular;
      else r.classification = JunctionClass::NonAdmissible;
    }
    out.push_back(std::move(r));
  }
  return out;
}

double boundary_kg_integral(const Surface& S, double s0, double s1) {
  const double T = S.boundary_length();
  if (!S.is_flat()) return S.boundary_eval(0.0).kg * (s1 - s0);
  const auto& D = S.flat_domain();
  auto cum = [&](double x) {
    double acc = 0.0;
    for (const auto& p : D.pieces) acc += p.curvature() * std::clamp(x - p.s0, 0.0, p.length);
    return acc;
  };
  const double full = cum(T);
  auto F = [&](double s) {
    double k = std::floor(s / T);
    return k * full + cum(s - k * T);
  };
  return F(s1) - F(s0);
}

Subdivision build_subdivision(const Surface& S, const GeodesicNetwork& net) {
  Subdivision sub;
  sub.split = register_crossings(S, net);
  const auto& pieces = sub.split.network.segments;
  std::vector<Vec2> where;
  auto groups = cluster_ends(sub.split.network, where);
  sub.vertices = where;
  std::vector<int> start_v(pieces.size()), end_v(pieces.size());
  for (size_t g = 0; g < groups.size(); ++g)
    for (const auto& e : groups[g]) (e.at_start ? start_v : end_v)[e.piece] = int(g);

  // boundary vertices, sorted by parameter
  const double T = S.boundary_length();
  std::vector<std::pair<double, int>> bverts;
  for (size_t v = 0; v < sub.vertices.size(); ++v) {
    auto pr = S.project_to_boundary(sub.vertices[v]);
    if (pr.distance < kSnapTolerance) bverts.push_back({pr.s, int(v)});
  }
  if (bverts.empty()) {
    sub.vertices.push_back(S.boundary_eval(0.0).point);
    bverts.push_back({0.0, int(sub.vertices.size()) - 1});
  }
  std::sort(bverts.begin(), bverts.end());

  const double spacing = 1e-3;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& P = pieces[i].path;
    if (P.length == 0.0) continue;
    SubdivisionEdge e;
    e.segment = int(i);
    e.multiplicity = pieces[i].multiplicity;
    e.length = P.length;
    e.from = start_v[i];
    e.to = end_v[i];
    e.start_dir = P.initial_velocity;
    e.end_dir = P.end_velocity();
    SampleOptions opt;
    opt.spacing = spacing;
    e.samples = sample_geodesic(S, P.start, P.initial_velocity, P.length, opt).samples;
    e.samples.back() = P.end();
    sub.edges.push_back(std::move(e));
  }
  for (size_t k = 0; k < bverts.size(); ++k) {
    SubdivisionEdge e;
    e.on_boundary = true;
    e.s0 = bverts[k].first;
    e.s1 = k + 1 < bverts.size() ? bverts[k + 1].first : bverts[0].first + T;
    e.length = e.s1 - e.s0;
    e.from = bverts[k].second;
    e.to = bverts[(k + 1) % bverts.size()].second;
    e.start_dir = S.boundary_eval(e.s0).tangent;
    e.end_dir = S.boundary_eval(e.s1).tangent;
    int m = std::max(8, int(std::ceil(e.length / spacing)));
    for (int j = 0; j <= m; ++j) e.samples.push_back(S.boundary_eval(e.s0 + e.length * j / m).point);
    e.samples.front() = sub.vertices[e.from];
    e.samples.back() = sub.vertices[e.to];
    sub.edges.push_back(std::move(e));
  }

  // half-edge structure: h = 2 e (+1 when reversed)
  const int H = int(2 * sub.edges.size());
  auto origin = [&](int h) { const auto& e = sub.edges[h / 2]; return h % 2 ? e.to : e.from; };
  auto head = [&](int h) { const auto& e = sub.edges[h / 2]; return h % 2 ? e.from : e.to; };
  auto out_dir = [&](int h) { const auto& e = sub.edges[h / 2]; return h % 2 ? -e.end_dir : e.start_dir; };
  auto in_dir = [&](int h) { const auto& e = sub.edges[h / 2]; return h % 2 ? -e.start_dir : e.end_dir; };
  std::vector<std::vector<int>> around(sub.vertices.size());
  for (int h = 0; h < H; ++h) around[origin(h)].push_back(h);
  std::vector<int> pos(H);
  for (auto& list : around) {
    std::sort(list.begin(), list.end(), [&](int a, int b) { return angle_of(out_dir(a)) < angle_of(out_dir(b)); });
    for (size_t k = 0; k < list.size(); ++k) pos[list[k]] = int(k);
  }
  auto next = [&](int h) {
    const auto& list = around[head(h)];
    int i = pos[h ^ 1];
    return list[(i + int(list.size()) - 1) % int(list.size())];
  };

  struct Cycle {
    std::vector<int> half;
    std::vector<Vec2> poly;
    double area = 0.0;
  };
  std::vector<Cycle> cycles;
  std::vector<int> cycle_of(H, -1);
  for (int h0 = 0; h0 < H; ++h0) {
    if (cycle_of[h0] >= 0) continue;
    Cycle c;
    int h = h0;
    do {
      if (cycle_of[h] >= 0) throw Error(ErrorCode::TriangulationFailure, "inconsistent half-edge cycle");
      cycle_of[h] = int(cycles.size());
      c.half.push_back(h);
      const auto& s = sub.edges[h / 2].samples;
      if (h % 2) c.poly.insert(c.poly.end(), s.rbegin(), s.rend() - 1);
      else c.poly.insert(c.poly.end(), s.begin(), s.end() - 1);
      h = next(h);
      if (c.half.size() > size_t(H)) throw Error(ErrorCode::TriangulationFailure, "runaway face traversal");
    } while (h != h0);
    c.area = shoelace(c.poly);
    cycles.push_back(std::move(c));
  }

  std::vector<int> face_of_cycle(cycles.size(), -1);
  std::vector<int> outer_cycles, holes;
  for (size_t c = 0; c < cycles.size(); ++c) {
    bool all_back_arcs = std::all_of(cycles[c].half.begin(), cycles[c].half.end(),
                                     [&](int h) { return h % 2 == 1 && sub.edges[h / 2].on_boundary; });
    if (all_back_arcs) continue;  // outside of the surface
    if (cycles[c].area > 0) {
      face_of_cycle[c] = int(sub.faces.size());
      Face f;
      f.loops.push_back(cycles[c].poly);
      sub.faces.push_back(std::move(f));
      outer_cycles.push_back(int(c));
    } else {
      holes.push_back(int(c));
    }
  }
  for (int hc : holes) {
    int best = -1;
    double best_area = 0.0;
    for (int oc : outer_cycles) {
      bool shares = false;
      for (int h : cycles[hc].half)
        for (int k : cycles[oc].half) shares = shares || (h / 2 == k / 2);
      if (shares || !point_in_polygon(cycles[hc].poly.front(), cycles[oc].poly)) continue;
      if (best < 0 || cycles[oc].area < best_area) best = oc, best_area = cycles[oc].area;
    }
    if (best < 0) throw Error(ErrorCode::TriangulationFailure, "hole without an enclosing face");
    face_of_cycle[hc] = face_of_cycle[best];
    sub.faces[face_of_cycle[best]].loops.push_back(cycles[hc].poly);
    sub.faces[face_of_cycle[best]].euler_char -= 1;
  }

  for (size_t c = 0; c < cycles.size(); ++c) {
    int fi = face_of_cycle[c];
    if (fi < 0) continue;
    Face& f = sub.faces[fi];
    const auto& hs = cycles[c].half;
    for (size_t k = 0; k < hs.size(); ++k) {
      int h = hs[k], prev = hs[(k + hs.size() - 1) % hs.size()];
      const auto& e = sub.edges[h / 2];
      f.boundary_word.push_back({h / 2, h % 2 == 0});
      if (e.on_boundary) f.boundary_arcs.push_back({e.s0, e.s1});
      Corner cn;
      cn.point = sub.vertices[origin(h)];
      cn.turning = wrap_angle(metric_angle(S, cn.point, in_dir(prev), out_dir(h)));
      cn.interior = kPi - cn.turning;
      bool b1 = sub.edges[prev / 2].on_boundary, b2 = e.on_boundary;
      cn.geodesic_meets_boundary = b1 != b2;
      cn.geodesic_corner = !b1 && !b2;
      f.corners.push_back(cn);
      f.turning_angles.push_back(cn.turning);
    }
    if (hs.size() > 0)
      for (int h : hs) {
        auto& e = sub.edges[h / 2];
        (h % 2 ? e.right_face : e.left_face) = fi;
      }
  }

  for (auto& f : sub.faces) {
    if (S.is_flat()) {
      for (const auto& l : f.loops) f.area += shoelace(l);
    } else {
      const auto& pr = S.profile();
      for (const auto& l : f.loops) f.area += radial_fan([&](double r) { return area_antiderivative(pr, r); }, l, pr.s_boundary);
    }
  }
  return sub;
}

std::vector<Face> extract_faces(const Surface& surface, const GeodesicNetwork& net) {
  return build_subdivision(surface, net).faces;
}

StarCheck check_star_property(const Face& face) {
  StarCheck r;
  for (size_t k = 0; k < face.corners.size(); ++k) {
    const auto& c = face.corners[k];
    char buf[160];
    if (c.geodesic_corner && !(c.interior < kPi - 1e-9)) {
      std::snprintf(buf, sizeof buf, "corner %zu at (%.6f, %.6f): inner angle %.9f is not below pi", k, c.point.x, c.point.y, c.interior);
      r.violations.push_back(buf);
    }
    if (c.geodesic_meets_boundary && c.interior > kPi / 2 + 1e-9) {
      std::snprintf(buf, sizeof buf, "corner %zu at (%.6f, %.6f): angle with the boundary %.9f exceeds pi/2", k, c.point.x, c.point.y, c.interior);
      r.violations.push_back(buf);
    }
  }
  r.ok = r.violations.empty();
  return r;
}

GaussBonnetTerms gauss_bonnet_terms(const Surface& S, const Face& face) {
  GaussBonnetTerms t;
  t.euler_char = face.euler_char;
  if (!S.is_flat()) {
    if (face.loops.empty()) throw Error(ErrorCode::TriangulationFailure, "face without a boundary");
    const auto& pr = S.profile();
    for (const auto& l : face.loops) t.curvature += radial_fan([&](double r) { return curvature_antiderivative(pr, r); }, l, pr.s_boundary);
  }
  for (auto [a, b] : face.boundary_arcs) t.boundary_kg += boundary_kg_integral(S, a, b);
  for (double th : face.turning_angles) t.turning += th;
  t.residual = std::abs(t.curvature + t.boundary_kg + t.turning - kTwoPi * t.euler_char);
  return t;
}

double gauss_bonnet_audit(const Surface& surface, const Face& face) { return gauss_bonnet_terms(surface, face).residual; }

ParityDecomposition parity_decomposition(const Subdivision& sub) {
  const int F = int(sub.faces.size());
  ParityDecomposition d;
  d.color.assign(F, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(F);
  for (size_t e = 0; e < sub.edges.size(); ++e) {
    const auto& E = sub.edges[e];
    if (E.on_boundary) continue;
    if (E.multiplicity % 2) d.gamma.push_back(int(e));
    if (E.left_face < 0 || E.right_face < 0) continue;
    adj[E.left_face].push_back({E.right_face, E.multiplicity % 2});
    adj[E.right_face].push_back({E.left_face, E.multiplicity % 2});
  }
  for (int s = 0; s < F; ++s) {
    if (d.color[s] >= 0) continue;
    d.color[s] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int f = q.front();
      q.pop_front();
      for (auto [g, par] : adj[f]) {
        int want = d.color[f] ^ par;
        if (d.color[g] < 0) {
          d.color[g] = want;
          q.push_back(g);
        } else if (d.color[g] != want) {
          throw Error(ErrorCode::ParityInconsistency, "faces cannot be 2-colored across odd edges");
        }
      }
    }
  }
  for (int f = 0; f < F; ++f) (d.color[f] == 0 ? d.I : d.J).push_back(f);
  return d;
}

ParityDecomposition parity_decomposition(const Surface& surface, const GeodesicNetwork& net) {
  return parity_decomposition(build_subdivision(surface, net));
}

bool parity_identity_holds(const Subdivision& sub, const ParityDecomposition& dec) {
  for (const auto& E : sub.edges) {
    if (E.on_boundary) continue;
    int odd = E.multiplicity % 2;
    for (int side : {0, 1}) {
      int cnt = 0;
      for (int f : {E.left_face, E.right_face})
        if (f >= 0 && dec.color[f] == side) ++cnt;
      if (cnt % 2 != odd) return false;
    }
  }
  return true;
}

HypothesisReport check_hypotheses(const Surface& S, const GeodesicNetwork& net) {
  HypothesisReport r;
  char buf[160];
  for (const auto& j : check_stationarity(S, net, kSnapTolerance)) {
    if (j.on_boundary) continue;
    if (std::abs(j.density - std::round(j.density)) > 1e-12) {
      r.integer_density = false;
      std::snprintf(buf, sizeof buf, "interior junction at (%.6f, %.6f) has density %.1f", j.location.x, j.location.y, j.density);
      r.violations.push_back(buf);
    }
  }
  Subdivision sub = build_subdivision(S, net);
  for (size_t f = 0; f < sub.faces.size(); ++f)
    for (const auto& c : sub.faces[f].corners) {
      if (c.geodesic_corner && !(c.interior < kPi - 1e-9)) {
        r.angles_below_pi = false;
        std::snprintf(buf, sizeof buf, "face %zu: inner angle %.9f at (%.6f, %.6f)", f, c.interior, c.point.x, c.point.y);
        r.violations.push_back(buf);
      }
      if (c.geodesic_meets_boundary && c.interior > kPi / 2 + 1e-9) {
        r.boundary_angles = false;
        std::snprintf(buf, sizeof buf, "face %zu: boundary angle %.9f at (%.6f, %.6f)", f, c.interior, c.point.x, c.point.y);
        r.violations.push_back(buf);
      }
    }
  // support components
  const auto& pieces = sub.split.network.segments;
  std::vector<int> parent(sub.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<char> used(sub.vertices.size(), 0);
  for (const auto& e : sub.edges) {
    if (e.on_boundary) continue;
    parent[find(e.from)] = find(e.to);
    used[e.from] = used[e.to] = 1;
  }
  std::vector<int> roots;
  for (size_t v = 0; v < sub.vertices.size(); ++v)
    if (used[v] && std::find(roots.begin(), roots.end(), find(int(v))) == roots.end()) roots.push_back(find(int(v)));
  r.components = int(roots.size());
  r.touches_boundary = !pieces.empty();
  for (int root : roots) {
    bool touch = false;
    for (size_t v = 0; v < sub.vertices.size(); ++v)
      if (used[v] && find(int(v)) == root && S.project_to_boundary(sub.vertices[v]).distance < kSnapTolerance) touch = true;
    r.touches_boundary = r.touches_boundary && touch;
  }
  return r;
}

}  // namespace geonet
