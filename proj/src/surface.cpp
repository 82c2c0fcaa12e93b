#include "geonet/surface.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"

namespace geonet {

using nlohmann::json;

const char* kind_name(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::FlatConvexDomain: return "FlatConvexDomain";
    case SurfaceKind::SurfaceOfRevolution: return "SurfaceOfRevolution";
    case SurfaceKind::SphericalCap: return "SphericalCap";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- pieces

Vec2 BoundaryPiece::point(double local) const {
  if (type == Type::Line) return a + (b - a) * (local / length);
  return center + unit_from_angle(angle0 + local / radius) * radius;
}

Vec2 BoundaryPiece::tangent(double local) const {
  if (type == Type::Line) return (b - a) / length;
  return perp(unit_from_angle(angle0 + local / radius));
}

Vec2 BoundaryPiece::closest(Vec2 p, double& local) const {
  if (type == Type::Line) {
    Vec2 e = (b - a) / length;
    local = std::clamp(dot(p - a, e), 0.0, length);
    return point(local);
  }
  Vec2 d = p - center;
  if (norm(d) < 1e-300) {
    local = 0.0;
    return point(0.0);
  }
  double rel = wrap_period(angle_of(d) - angle0, kTwoPi);
  if (rel <= sweep) {
    local = rel * radius;
    return point(local);
  }
  Vec2 p0 = point(0.0);
  Vec2 p1 = point(length);
  if (norm(p - p0) <= norm(p - p1)) {
    local = 0.0;
    return p0;
  }
  local = length;
  return p1;
}

// ---------------------------------------------------------------- flat domains

namespace {

void finalize_pieces(FlatDomain& d) {
  std::vector<BoundaryPiece> kept;
  double s = 0.0;
  for (auto p : d.pieces) {
    p.length = p.type == BoundaryPiece::Type::Line ? norm(p.b - p.a) : p.radius * p.sweep;
    if (p.length < 1e-14) continue;
    p.s0 = s;
    s += p.length;
    kept.push_back(p);
  }
  d.pieces = std::move(kept);
  d.perimeter = s;
}

BoundaryPiece make_line(Vec2 a, Vec2 b) {
  BoundaryPiece p;
  p.type = BoundaryPiece::Type::Line;
  p.a = a;
  p.b = b;
  return p;
}

BoundaryPiece make_arc(Vec2 c, double r, double a0, double sweep) {
  BoundaryPiece p;
  p.type = BoundaryPiece::Type::Arc;
  p.center = c;
  p.radius = r;
  p.angle0 = a0;
  p.sweep = sweep;
  return p;
}

Vec2 rotate(Vec2 v, double a) {
  double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace

FlatDomain FlatDomain::disk(Vec2 center, double radius) {
  if (!(radius > 0)) throw Error(ErrorCode::ConfigInvalid, "disk radius must be positive");
  FlatDomain d;
  d.shape = "disk";
  d.pieces.push_back(make_arc(center, radius, 0.0, kTwoPi));
  finalize_pieces(d);
  return d;
}

FlatDomain FlatDomain::rounded_polygon(std::vector<Vec2> v, double rho) {
  const size_t n = v.size();
  if (n < 3) throw Error(ErrorCode::ConfigInvalid, "polygon needs at least 3 vertices");
  if (rho < 0) throw Error(ErrorCode::ConfigInvalid, "rounding must be nonnegative");
  double area2 = 0.0;
  for (size_t i = 0; i < n; ++i) area2 += cross(v[i], v[(i + 1) % n]);
  if (area2 < 0) std::reverse(v.begin(), v.end());
  for (size_t i = 0; i < n; ++i) {
    Vec2 e0 = v[(i + 1) % n] - v[i];
    Vec2 e1 = v[(i + 2) % n] - v[(i + 1) % n];
    if (cross(e0, e1) <= 0) throw Error(ErrorCode::ConfigInvalid, "polygon is not strictly convex");
  }
  std::vector<Vec2> nrm(n);
  for (size_t i = 0; i < n; ++i) {
    Vec2 e = v[(i + 1) % n] - v[i];
    e = e / norm(e);
    nrm[i] = {e.y, -e.x};
  }
  FlatDomain d;
  d.shape = "polygon";
  d.rounding = rho;
  if (rho == 0.0) {
    for (size_t i = 0; i < n; ++i) d.pieces.push_back(make_line(v[i], v[(i + 1) % n]));
  } else {
    std::vector<Vec2> w(n);
    for (size_t i = 0; i < n; ++i) {
      Vec2 n0 = nrm[(i + n - 1) % n], n1 = nrm[i];
      w[i] = v[i] - (n0 + n1) * (rho / (1.0 + dot(n0, n1)));
    }
    for (size_t i = 0; i < n; ++i) {
      size_t j = (i + 1) % n;
      Vec2 a = w[i] + nrm[i] * rho, b = w[j] + nrm[i] * rho;
      if (dot(b - a, v[j] - v[i]) <= 0) throw Error(ErrorCode::ConfigInvalid, "rounding radius too large");
      d.pieces.push_back(make_line(a, b));
      double a0 = angle_of(nrm[i]);
      d.pieces.push_back(make_arc(w[j], rho, a0, wrap_period(angle_of(nrm[j]) - a0, kTwoPi)));
    }
  }
  finalize_pieces(d);
  return d;
}

FlatDomain FlatDomain::rounded_sector(double R, double A, double rho) {
  if (!(R > 0) || !(A > 0) || !(A < kPi)) throw Error(ErrorCode::ConfigInvalid, "sector needs R > 0 and 0 < angle < pi");
  if (rho < 0 || rho * (1.0 + 1.0 / std::sin(A / 2)) >= R)
    throw Error(ErrorCode::ConfigInvalid, "sector rounding out of range");
  FlatDomain d;
  d.shape = "sector";
  d.rounding = rho;
  Vec2 d1 = unit_from_angle(A);
  if (rho == 0.0) {
    d.pieces.push_back(make_line({0, 0}, {R, 0}));
    d.pieces.push_back(make_arc({0, 0}, R, 0.0, A));
    d.pieces.push_back(make_line(d1 * R, {0, 0}));
  } else {
    Vec2 c0 = unit_from_angle(A / 2) * (rho / std::sin(A / 2));
    Vec2 c1 = {std::sqrt((R - rho) * (R - rho) - rho * rho), rho};
    Vec2 c2 = rotate({c1.x, -rho}, A);
    double a1 = angle_of(c1), a2 = angle_of(c2);
    d.pieces.push_back(make_line({c0.x, 0}, {c1.x, 0}));
    d.pieces.push_back(make_arc(c1, rho, -kPi / 2, a1 + kPi / 2));
    d.pieces.push_back(make_arc({0, 0}, R, a1, a2 - a1));
    d.pieces.push_back(make_arc(c2, rho, a2, A + kPi / 2 - a2));
    d.pieces.push_back(make_line(d1 * dot(c2, d1), d1 * dot(c0, d1)));
    d.pieces.push_back(make_arc(c0, rho, A + kPi / 2, kPi - A));
  }
  finalize_pieces(d);
  return d;
}

int FlatDomain::piece_at(double s) const {
  s = wrap_period(s, perimeter);
  int lo = 0, hi = static_cast<int>(pieces.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (pieces[mid].s0 <= s) lo = mid; else hi = mid - 1;
  }
  return lo;
}

std::vector<ChordHit> FlatDomain::line_hits(Vec2 o, Vec2 d) const {
  std::vector<ChordHit> hits;
  for (const auto& p : pieces) {
    if (p.type == BoundaryPiece::Type::Line) {
      Vec2 e = p.b - p.a;
      double den = cross(d, e);
      if (std::abs(den) < 1e-14 * p.length) {
        if (std::abs(cross(p.a - o, d)) < 1e-12) {
          hits.push_back({dot(p.a - o, d), p.s0});
          hits.push_back({dot(p.b - o, d), p.s0 + p.length});
        }
        continue;
      }
      double t = cross(p.a - o, e) / den;
      double u = cross(p.a - o, d) / den;
      if (u >= -1e-12 && u <= 1.0 + 1e-12) hits.push_back({t, p.s0 + std::clamp(u, 0.0, 1.0) * p.length});
    } else {
      Vec2 q = o - p.center;
      double bq = dot(q, d);
      double disc = bq * bq - (dot(q, q) - p.radius * p.radius);
      if (disc < 0) continue;
      double sq = std::sqrt(disc);
      for (double t : {-bq - sq, -bq + sq}) {
        Vec2 x = q + d * t;
        double rel = wrap_period(angle_of(x) - p.angle0, kTwoPi);
        if (rel > p.sweep + 1e-12) {
          if (rel > kTwoPi - 1e-12) rel = 0.0; else continue;
        }
        hits.push_back({t, p.s0 + std::clamp(rel, 0.0, p.sweep) * p.radius});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const ChordHit& a, const ChordHit& b) { return a.t < b.t; });
  return hits;
}

double FlatDomain::closest(Vec2 p, double& s, Vec2& foot) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pc : pieces) {
    double local = 0.0;
    Vec2 q = pc.closest(p, local);
    double dist = norm(p - q);
    if (dist < best - 1e-14) {
      best = dist;
      s = pc.s0 + local;
      foot = q;
    }
  }
  if (s >= perimeter) s -= perimeter;
  return best;
}

bool FlatDomain::contains(Vec2 p, double tol) const {
  auto hits = line_hits(p, {1.0, 0.0});
  if (!hits.empty() && hits.front().t <= 0.0 && hits.back().t >= 0.0) return true;
  double s;
  Vec2 foot;
  return closest(p, s, foot) <= tol;
}

double FlatDomain::area() const {
  double a2 = 0.0;
  for (const auto& p : pieces) {
    if (p.type == BoundaryPiece::Type::Line) {
      a2 += cross(p.a, p.b);
    } else {
      Vec2 e0 = unit_from_angle(p.angle0), e1 = unit_from_angle(p.angle0 + p.sweep);
      a2 += p.radius * cross(p.center, e1 - e0) + p.radius * p.radius * p.sweep;
    }
  }
  return 0.5 * a2;
}

Vec2 FlatDomain::centroid() const {
  // Polygonal approximation is enough: the centroid only serves as a winding reference.
  std::vector<Vec2> pts;
  for (const auto& p : pieces) {
    int m = p.type == BoundaryPiece::Type::Line ? 1 : 64;
    for (int k = 0; k < m; ++k) pts.push_back(p.point(p.length * k / m));
  }
  double a = 0.0;
  Vec2 c;
  for (size_t i = 0; i < pts.size(); ++i) {
    Vec2 p = pts[i], q = pts[(i + 1) % pts.size()];
    double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  return c / (3.0 * a);
}

// ---------------------------------------------------------------- rotational profile

double RotationalProfile::r(double s) const {
  if (sphere || s <= s_blend) return rho * std::sin(s / rho);
  return r_blend + tail_rate * (s - s_blend);
}

double RotationalProfile::dr(double s) const {
  if (sphere || s <= s_blend) return std::cos(s / rho);
  return tail_rate;
}

double RotationalProfile::ddr(double s) const {
  if (sphere || s <= s_blend) return -std::sin(s / rho) / rho;
  return 0.0;
}

double RotationalProfile::curvature(double s) const {
  if (sphere || s <= s_blend) return 1.0 / (rho * rho);
  return 0.0;
}

double RotationalProfile::native_of_s(double s) const {
  if (sphere) return s / rho;
  if (s <= s_blend) return rho * (1.0 - std::cos(s / rho));
  return u_blend + (s - s_blend) * tail_rate / slope;
}

double RotationalProfile::s_of_native(double n) const {
  if (sphere) return n * rho;
  if (n <= u_blend) return rho * std::acos(std::clamp(1.0 - n / rho, -1.0, 1.0));
  return s_blend + (n - u_blend) * slope / tail_rate;
}

double RotationalProfile::r_native(double n) const {
  if (sphere) return rho * std::sin(n);
  if (n <= u_blend) return std::sqrt(std::max(0.0, 2.0 * rho * n - n * n));
  return slope * n + intercept;
}

double RotationalProfile::dr_native(double n) const {
  if (sphere) return rho * std::cos(n);
  if (n <= u_blend) return (rho - n) / r_native(n);
  return slope;
}

double RotationalProfile::ddr_native(double n) const {
  if (sphere) return -rho * std::sin(n);
  if (n <= u_blend) {
    double r0 = r_native(n);
    return -rho * rho / (r0 * r0 * r0);
  }
  return 0.0;
}

double RotationalProfile::e_native(double n) const {
  if (sphere) return rho * rho;
  double d = dr_native(n);
  return 1.0 + d * d;
}

double RotationalProfile::de_native(double n) const {
  if (sphere) return 0.0;
  return 2.0 * dr_native(n) * ddr_native(n);
}

double RotationalProfile::area() const {
  if (sphere) return kTwoPi * rho * rho * (1.0 - std::cos(s_boundary / rho));
  double cap = kTwoPi * rho * rho * (1.0 - std::cos(s_blend / rho));
  double l = s_boundary - s_blend;
  return cap + kTwoPi * (r_blend * l + 0.5 * tail_rate * l * l);
}

void RotationalProfile::chart_coefficients(double s, double& f, double& fs, double& h, double& hs) const {
  if (sphere || s <= s_blend) {
    const double t = s / rho;
    const double r2 = rho * rho;
    double q, qs, P, Ps;
    if (t < 0.1) {
      const double t2 = t * t, t4 = t2 * t2, t6 = t4 * t2, t8 = t4 * t4;
      const double c12 = 2048.0 / 479001600.0;
      q = 1.0 - t2 / 6.0 + t4 / 120.0 - t6 / 5040.0 + t8 / 362880.0;
      qs = (-1.0 / 3.0 + t2 / 30.0 - t4 / 840.0 + t6 / 45360.0) / r2;
      P = 1.0 / 3.0 - 2.0 * t2 / 45.0 + t4 / 315.0 - 2.0 * t6 / 14175.0 + c12 * t8;
      Ps = -4.0 / 45.0 + 4.0 * t2 / 315.0 - 12.0 * t4 / 14175.0 + 8.0 * c12 * t6;
    } else {
      const double st = std::sin(t), ct = std::cos(t);
      const double t2 = t * t;
      q = st / t;
      qs = (t * ct - st) / (r2 * t2 * t);
      const double num = t2 - st * st;
      P = num / (t2 * t2);
      Ps = ((2.0 * t - std::sin(2.0 * t)) * t - 4.0 * num) / (t2 * t2 * t2);
    }
    f = q * q;
    fs = 2.0 * q * qs;
    h = P / r2;
    hs = Ps / (r2 * r2);
    return;
  }
  const double rr = r(s);
  const double q = rr / s;
  const double qs = (tail_rate * s - rr) / (s * s * s);
  f = q * q;
  fs = 2.0 * q * qs;
  h = (1.0 - f) / (s * s);
  hs = -fs / (s * s) - 2.0 * (1.0 - f) / (s * s * s * s);
}

// ---------------------------------------------------------------- surface

Surface Surface::flat(FlatDomain domain) {
  Surface s;
  s.kind_ = SurfaceKind::FlatConvexDomain;
  s.flat_ = std::make_shared<FlatDomain>(std::move(domain));
  s.finish();
  return s;
}

Surface Surface::disk(double radius, Vec2 center) {
  Surface s = flat(FlatDomain::disk(center, radius));
  s.descriptor_ = json{{"kind", "FlatConvexDomain"},
                       {"params", {{"shape", "disk"}, {"radius", radius}, {"center", {center.x, center.y}}}}}
                      .dump();
  return s;
}

Surface Surface::rounded_polygon(std::vector<Vec2> vertices, double rho) {
  json verts = json::array();
  for (auto v : vertices) verts.push_back({v.x, v.y});
  Surface s = flat(FlatDomain::rounded_polygon(std::move(vertices), rho));
  s.descriptor_ = json{{"kind", "FlatConvexDomain"},
                       {"params", {{"shape", "polygon"}, {"vertices", verts}, {"rounding", rho}}}}
                      .dump();
  return s;
}

Surface Surface::rounded_sector(double radius, double angle, double rho) {
  Surface s = flat(FlatDomain::rounded_sector(radius, angle, rho));
  s.descriptor_ = json{{"kind", "FlatConvexDomain"},
                       {"params", {{"shape", "sector"}, {"radius", radius}, {"angle", angle}, {"rounding", rho}}}}
                      .dump();
  return s;
}

Surface Surface::equilateral_triangle(double area, double rho) {
  if (!(area > 0)) throw Error(ErrorCode::ConfigInvalid, "triangle area must be positive");
  double a = std::sqrt(4.0 * area / std::sqrt(3.0));
  Surface s = flat(FlatDomain::rounded_polygon({{-a / 2, 0.0}, {a / 2, 0.0}, {0.0, a * std::sqrt(3.0) / 2}}, rho));
  s.descriptor_ = json{{"kind", "FlatConvexDomain"},
                       {"params", {{"shape", "equilateral_triangle"}, {"area", area}, {"rounding", rho}}}}
                      .dump();
  return s;
}

namespace {

RotationalProfile blended_profile(double rho, double slope) {
  if (!(rho > 0) || !(slope > 0)) throw Error(ErrorCode::ConfigInvalid, "revolution needs cap_radius > 0 and slope > 0");
  RotationalProfile p;
  p.sphere = false;
  p.rho = rho;
  p.slope = slope;
  double phi0 = std::atan(1.0 / slope);
  p.u_blend = rho * (1.0 - std::cos(phi0));
  p.r_blend = rho * std::sin(phi0);
  p.intercept = p.r_blend - slope * p.u_blend;
  p.s_blend = rho * phi0;
  p.tail_rate = slope / std::sqrt(1.0 + slope * slope);
  return p;
}

}  // namespace

Surface Surface::revolution(double cap_radius, double slope, double cut_height) {
  RotationalProfile p = blended_profile(cap_radius, slope);
  if (!(cut_height > p.u_blend))
    throw Error(ErrorCode::ConfigInvalid, "cut height must lie beyond the blend point");
  p.s_boundary = p.s_of_native(cut_height);
  Surface s;
  s.kind_ = SurfaceKind::SurfaceOfRevolution;
  s.profile_ = std::make_shared<RotationalProfile>(p);
  s.finish();
  s.descriptor_ = json{{"kind", "SurfaceOfRevolution"},
                       {"params", {{"cap_radius", cap_radius}, {"slope", slope}, {"cut_height", cut_height}}}}
                      .dump();
  return s;
}

Surface Surface::revolution_with_boundary_radius(double cap_radius, double slope, double boundary_radius) {
  RotationalProfile p = blended_profile(cap_radius, slope);
  if (!(boundary_radius > p.r_blend))
    throw Error(ErrorCode::ConfigInvalid, "boundary radius must exceed the blend radius");
  return revolution(cap_radius, slope, (boundary_radius - p.intercept) / slope);
}

Surface Surface::spherical_cap(double radius, double colatitude) {
  if (!(radius > 0) || !(colatitude > 0) || !(colatitude < kPi / 2))
    throw Error(ErrorCode::ConfigInvalid, "spherical cap needs radius > 0 and 0 < colatitude < pi/2");
  RotationalProfile p;
  p.sphere = true;
  p.rho = radius;
  p.s_blend = std::numeric_limits<double>::infinity();
  p.s_boundary = radius * colatitude;
  Surface s;
  s.kind_ = SurfaceKind::SphericalCap;
  s.profile_ = std::make_shared<RotationalProfile>(p);
  s.finish();
  s.descriptor_ = json{{"kind", "SphericalCap"}, {"params", {{"radius", radius}, {"colatitude", colatitude}}}}.dump();
  return s;
}

void Surface::finish() {
  if (is_flat()) {
    boundary_length_ = flat_->perimeter;
    center_ = flat_->centroid();
    std::vector<Vec2> pts;
    const int m = 720;
    for (int k = 0; k < m; ++k) {
      double s = boundary_length_ * k / m;
      pts.push_back(flat_->pieces[flat_->piece_at(s)].point(s - flat_->pieces[flat_->piece_at(s)].s0));
    }
    for (const auto& pc : flat_->pieces) pts.push_back(pc.point(0.0));
    double dmax = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) dmax = std::max(dmax, norm(pts[i] - pts[j]));
    diameter_ = dmax;
  } else {
    boundary_length_ = kTwoPi * profile_->boundary_radius();
    center_ = {0.0, 0.0};
    diameter_ = 2.0 * profile_->s_boundary;
  }
}

const FlatDomain& Surface::flat_domain() const {
  if (!flat_) throw Error(ErrorCode::NotFlat, "surface is not a flat domain");
  return *flat_;
}

const RotationalProfile& Surface::profile() const {
  if (!profile_) throw Error(ErrorCode::WrongSurfaceKind, "surface is not rotationally symmetric");
  return *profile_;
}

double Surface::area() const { return is_flat() ? flat_->area() : profile_->area(); }

double Surface::max_curvature() const {
  return is_flat() ? 0.0 : 1.0 / (profile_->rho * profile_->rho);
}

double Surface::min_boundary_curvature() const {
  if (!is_flat()) return profile_->dr(profile_->s_boundary) / profile_->boundary_radius();
  double k = std::numeric_limits<double>::infinity();
  for (const auto& p : flat_->pieces) k = std::min(k, p.curvature());
  return k;
}

bool Surface::contains(Vec2 p, double tol) const {
  if (is_flat()) return flat_->contains(p, tol);
  return norm(p) <= profile_->s_boundary + tol;
}

double Surface::boundary_function(Vec2 p) const {
  if (!is_flat()) return profile_->s_boundary - norm(p);
  double s;
  Vec2 foot;
  double d = flat_->closest(p, s, foot);
  return flat_->contains(p, 0.0) ? d : -d;
}

void Surface::require_inside(Vec2 p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !contains(p, 1e-9))
    throw Error(ErrorCode::PointOutsideDomain, "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") lies outside the domain");
}

Sym2 Surface::metric(Vec2 p) const {
  if (is_flat()) return {1.0, 0.0, 1.0};
  double f, fs, h, hs;
  profile_->chart_coefficients(norm(p), f, fs, h, hs);
  return {f + h * p.x * p.x, h * p.x * p.y, f + h * p.y * p.y};
}

Christoffel Surface::christoffel(Vec2 p) const {
  Christoffel G;
  if (is_flat()) return G;
  double f, fs, h, hs;
  profile_->chart_coefficients(norm(p), f, fs, h, hs);
  const double x[2] = {p.x, p.y};
  const Sym2 g = {f + h * p.x * p.x, h * p.x * p.y, f + h * p.y * p.y};
  const Sym2 gi = g.inverse();
  auto delta = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  double dg[2][2][2];  // dg[k][i][j] = d_k g_ij
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        dg[k][i][j] = fs * x[k] * delta(i, j) + hs * x[k] * x[i] * x[j] + h * (delta(i, k) * x[j] + delta(j, k) * x[i]);
  double first[2][2][2];  // Gamma_{l,ij}
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) first[l][i][j] = 0.5 * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        G.g[k][i][j] = G.g[k][j][i] = gi.at(k, 0) * first[0][i][j] + gi.at(k, 1) * first[1][i][j];
  return G;
}

double Surface::curvature(Vec2 p) const {
  if (is_flat()) return 0.0;
  return profile_->curvature(norm(p));
}

Sym2 Surface::metric_at(Vec2 p) const {
  require_inside(p);
  return metric(p);
}

Christoffel Surface::christoffel_at(Vec2 p) const {
  require_inside(p);
  return christoffel(p);
}

double Surface::gauss_curvature_at(Vec2 p) const {
  require_inside(p);
  return curvature(p);
}

BoundaryFrame Surface::boundary_eval(double s) const {
  BoundaryFrame fr;
  fr.s = wrap_period(s, boundary_length_);
  if (is_flat()) {
    const auto& pc = flat_->pieces[flat_->piece_at(fr.s)];
    double local = std::clamp(fr.s - pc.s0, 0.0, pc.length);
    fr.point = pc.point(local);
    fr.tangent = pc.tangent(local);
    fr.normal = perp(fr.tangent);
    fr.kg = pc.curvature();
    return fr;
  }
  const double S1 = profile_->s_boundary;
  const double r1 = profile_->boundary_radius();
  const double th = fr.s / r1;
  const Vec2 e = unit_from_angle(th);
  fr.point = e * S1;
  fr.tangent = perp(e) * (S1 / r1);
  fr.normal = -e;
  fr.kg = profile_->dr(S1) / r1;
  return fr;
}

BoundaryProjection Surface::project_to_boundary(Vec2 p) const {
  require_inside(p);
  BoundaryProjection out;
  if (is_flat()) {
    out.distance = flat_->closest(p, out.s, out.foot);
    return out;
  }
  const double S1 = profile_->s_boundary;
  const double rad = norm(p);
  double th = rad < 1e-300 ? 0.0 : wrap_period(angle_of(p), kTwoPi);
  out.s = wrap_period(th * profile_->boundary_radius(), boundary_length_);
  out.distance = std::max(0.0, S1 - rad);
  out.foot = unit_from_angle(th) * S1;
  return out;
}

Vec2 Surface::from_polar(double native, double theta) const {
  return unit_from_angle(theta) * profile().s_of_native(native);
}

Vec2 Surface::to_polar(Vec2 p) const {
  double rad = norm(p);
  return {profile().native_of_s(rad), rad < 1e-300 ? 0.0 : wrap_period(angle_of(p), kTwoPi)};
}

Sym2 Surface::polar_metric(double native) const {
  const auto& pr = profile();
  double r = pr.r_native(native);
  return {pr.e_native(native), 0.0, r * r};
}

Christoffel Surface::polar_christoffel(double native) const {
  const auto& pr = profile();
  Christoffel G;
  double e = pr.e_native(native), r = pr.r_native(native), dr = pr.dr_native(native);
  G.g[0][0][0] = pr.de_native(native) / (2.0 * e);
  G.g[0][1][1] = -r * dr / e;
  G.g[1][0][1] = G.g[1][1][0] = dr / r;
  return G;
}

// ---------------------------------------------------------------- descriptors

namespace {

double need(const json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number())
    throw Error(ErrorCode::ConfigInvalid, std::string("missing numeric parameter '") + key + "'");
  return params[key].get<double>();
}

double opt(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw Error(ErrorCode::ConfigInvalid, std::string("parameter '") + key + "' must be numeric");
  return params[key].get<double>();
}

}  // namespace

Surface Surface::from_descriptor(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("surface descriptor is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::ConfigInvalid, "surface descriptor needs a string 'kind'");
  const std::string kind = j["kind"];
  const json params = j.value("params", json::object());
  if (kind == "FlatConvexDomain") {
    const std::string shape = params.value("shape", "disk");
    if (shape == "disk") {
      Vec2 c;
      if (params.contains("center")) c = {params["center"].at(0).get<double>(), params["center"].at(1).get<double>()};
      return disk(opt(params, "radius", 1.0), c);
    }
    if (shape == "polygon") {
      if (!params.contains("vertices") || !params["vertices"].is_array())
        throw Error(ErrorCode::ConfigInvalid, "polygon needs 'vertices'");
      std::vector<Vec2> v;
      for (const auto& p : params["vertices"]) v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      return rounded_polygon(v, opt(params, "rounding", 0.0));
    }
    if (shape == "sector") return rounded_sector(opt(params, "radius", 1.0), need(params, "angle"), opt(params, "rounding", 0.0));
    if (shape == "equilateral_triangle") return equilateral_triangle(opt(params, "area", 1.0), opt(params, "rounding", 0.0));
    throw Error(ErrorCode::ConfigInvalid, "unknown flat shape '" + shape + "'");
  }
  if (kind == "SurfaceOfRevolution") {
    double rc = opt(params, "cap_radius", 1.0), a = need(params, "slope");
    if (params.contains("boundary_radius")) return revolution_with_boundary_radius(rc, a, need(params, "boundary_radius"));
    return revolution(rc, a, need(params, "cut_height"));
  }
  if (kind == "SphericalCap") return spherical_cap(opt(params, "radius", 1.0), need(params, "colatitude"));
  throw Error(ErrorCode::ConfigInvalid, "unknown surface kind '" + kind + "'");
}

}  // namespace geonet
