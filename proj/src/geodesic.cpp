#include "geonet/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "geonet/quadrature.hpp"

namespace geonet {

namespace {

using Y = std::array<double, 4>;

constexpr double kTol = 1e-12;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Integrator {
 public:
  explicit Integrator(const Surface& s) : s_(s) {}

  Y rhs(const Y& y) const {
    Vec2 acc = s_.christoffel({y[0], y[1]}).contract({y[2], y[3]});
    return {y[2], y[3], -acc.x, -acc.y};
  }

  // One trial step; returns the scaled error norm.
  double step(const Y& y, const Y& k1, double h, Y& out, Y& k7) const {
    auto comb = [&](std::initializer_list<std::pair<double, const Y*>> terms) {
      Y r = y;
      for (auto& [c, k] : terms)
        for (int i = 0; i < 4; ++i) r[i] += h * c * (*k)[i];
      return r;
    };
    Y k2 = rhs(comb({{a21, &k1}}));
    Y k3 = rhs(comb({{a31, &k1}, {a32, &k2}}));
    Y k4 = rhs(comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    Y k5 = rhs(comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    Y k6 = rhs(comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    out = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    k7 = rhs(out);
    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = kTol * (1.0 + std::max(std::abs(y[i]), std::abs(out[i])));
      err = std::max(err, std::abs(e) / sc);
    }
    return err;
  }

  static double grow(double err) {
    if (err == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
  }

  Y flow(Y y, double T) const {
    if (T == 0.0) return y;
    const double sign = T > 0 ? 1.0 : -1.0;
    double t = 0.0, h = sign * std::min(std::abs(T), 0.05);
    Y k1 = rhs(y), out, k7;
    while (sign * (T - t) > 0) {
      if (sign * (t + h - T) > 0) h = T - t;
      double err = step(y, k1, h, out, k7);
      if (err <= 1.0) {
        t = (std::abs(T - t - h) < 1e-15 * std::abs(T)) ? T : t + h;
        y = out;
        k1 = k7;
      }
      h *= grow(err);
      if (err > 1.0 && std::abs(h) < 1e-14 * (1.0 + std::abs(T)))
        throw Error(ErrorCode::StepFailure, "geodesic integrator step size underflow");
    }
    return y;
  }

 private:
  const Surface& s_;
};

Y pack(GeodesicState s) { return {s.x.x, s.x.y, s.v.x, s.v.y}; }
GeodesicState unpack(const Y& y) { return {{y[0], y[1]}, {y[2], y[3]}}; }

struct ShootCore {
  GeodesicState end;
  double length = 0.0;
  bool hit = false;
  double s_exit = 0.0;
  double winding = 0.0;  // polar angle swept about the surface center
};

ShootCore shoot_core(const Surface& S, Vec2 p, Vec2 w, double max_length) {
  ShootCore out;
  const Vec2 c = S.center();
  if (S.is_flat()) {
    const auto& dom = S.flat_domain();
    auto hits = dom.line_hits(p, w / norm(w));
    if (hits.empty()) throw Error(ErrorCode::PointOutsideDomain, "shooting from outside the domain");
    const ChordHit last = hits.back();
    double len = std::max(0.0, last.t);
    if (len <= max_length) {
      out.hit = true;
      out.length = len;
      out.s_exit = wrap_period(last.s, dom.perimeter);
    } else {
      out.length = max_length;
    }
    out.end = {p + w * out.length, w};
    out.winding = wrap_angle(angle_of(out.end.x - c) - angle_of(p - c));
    return out;
  }
  Integrator I(S);
  Y y = pack({p, w});
  Y k1 = I.rhs(y), nxt, k7;
  double t = 0.0, h = std::min(0.05, max_length);
  while (t < max_length) {
    if (t + h > max_length) h = max_length - t;
    double err = I.step(y, k1, h, nxt, k7);
    if (err <= 1.0) {
      if (S.boundary_function({nxt[0], nxt[1]}) < 0.0) {
        double lo = 0.0, hi = h;
        Y trial, kk;
        for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
          double mid = 0.5 * (lo + hi);
          I.step(y, k1, mid, trial, kk);
          if (S.boundary_function({trial[0], trial[1]}) >= 0.0) lo = mid; else hi = mid;
        }
        Y fin = y;
        if (lo > 0.0) I.step(y, k1, lo, fin, kk);
        out.winding += wrap_angle(angle_of(Vec2{fin[0], fin[1]} - c) - angle_of(Vec2{y[0], y[1]} - c));
        out.end = unpack(fin);
        out.length = t + lo;
        out.hit = true;
        out.s_exit = S.project_to_boundary(out.end.x * (1.0 - 1e-15)).s;
        return out;
      }
      out.winding += wrap_angle(angle_of(Vec2{nxt[0], nxt[1]} - c) - angle_of(Vec2{y[0], y[1]} - c));
      t += h;
      y = nxt;
      k1 = k7;
      if (max_length - t < 1e-15 * max_length) t = max_length;
    }
    h *= Integrator::grow(err);
    h = std::min(h, 0.25);
    if (err > 1.0 && h < 1e-14) throw Error(ErrorCode::StepFailure, "geodesic integrator step size underflow");
  }
  out.end = unpack(y);
  out.length = max_length;
  return out;
}

}  // namespace

GeodesicState geodesic_flow(const Surface& surface, GeodesicState s, double t) {
  if (surface.is_flat()) return {s.x + s.v * t, s.v};
  return unpack(Integrator(surface).flow(pack(s), t));
}

GeodesicPath GeodesicPath::reversed() const {
  GeodesicPath r;
  r.length = length;
  r.samples.assign(samples.rbegin(), samples.rend());
  for (auto it = velocities.rbegin(); it != velocities.rend(); ++it) r.velocities.push_back(-*it);
  r.start = r.samples.front();
  r.initial_velocity = r.velocities.front();
  return r;
}

GeodesicPath sample_geodesic(const Surface& surface, Vec2 p, Vec2 unit_v, double length, const SampleOptions& opt) {
  GeodesicPath path;
  path.start = p;
  path.initial_velocity = unit_v;
  path.length = length;
  const int n = std::max(1, int(std::ceil(length / opt.spacing - 1e-9)));
  const double h = length / n;
  path.samples.reserve(n + 1);
  path.velocities.reserve(n + 1);
  path.samples.push_back(p);
  path.velocities.push_back(unit_v);
  if (surface.is_flat()) {
    for (int k = 1; k <= n; ++k) {
      path.samples.push_back(p + unit_v * (h * k));
      path.velocities.push_back(unit_v);
    }
    return path;
  }
  Integrator I(surface);
  Y y = pack({p, unit_v});
  for (int k = 1; k <= n; ++k) {
    y = I.flow(y, h);
    Vec2 x{y[0], y[1]}, v{y[2], y[3]};
    path.samples.push_back(x);
    path.velocities.push_back(surface.normalize(x, v));
  }
  return path;
}

GeodesicPath sample_segment(const Surface& surface, const Segment& seg, const SampleOptions& opt) {
  if (seg.radial || surface.is_flat()) {
    GeodesicPath path;
    path.start = seg.a;
    path.initial_velocity = seg.velocity;
    path.length = seg.length;
    const int n = std::max(1, int(std::ceil(seg.length / opt.spacing - 1e-9)));
    Vec2 d = seg.b - seg.a;
    for (int k = 0; k <= n; ++k) {
      path.samples.push_back(k == n ? seg.b : seg.a + d * (double(k) / n));
      path.velocities.push_back(seg.velocity);
    }
    if (!surface.is_flat() && seg.length > 0.0) {
      for (size_t k = 0; k < path.samples.size(); ++k)
        path.velocities[k] = surface.normalize(path.samples[k], seg.b - seg.a);
    }
    return path;
  }
  GeodesicPath path = sample_geodesic(surface, seg.a, seg.velocity, seg.length, opt);
  path.samples.back() = seg.b;
  return path;
}

GeodesicState segment_state(const Surface& surface, const Segment& seg, double t) {
  if (seg.length == 0.0) return {seg.a, seg.velocity};
  if (seg.radial || surface.is_flat()) {
    Vec2 x = seg.a + (seg.b - seg.a) * (t / seg.length);
    return {x, surface.is_flat() ? seg.velocity : surface.normalize(x, seg.b - seg.a)};
  }
  return geodesic_flow(surface, {seg.a, seg.velocity}, t);
}

Vec2 segment_point(const Surface& surface, const Segment& seg, double t) { return segment_state(surface, seg, t).x; }

namespace {

bool solve2(const double J[2][2], Vec2 r, Vec2& out) {
  double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
  out = {(J[1][1] * r.x - J[0][1] * r.y) / det, (-J[1][0] * r.x + J[0][0] * r.y) / det};
  return true;
}

// Newton shooting for the velocity reaching q at parameter time 1.
bool newton_connect(const Integrator& I, Vec2 p, Vec2 q, Vec2& v, Y& end) {
  const double target = 1e-13 * (1.0 + norm(q));
  auto F = [&](Vec2 vv, Y& e) {
    e = I.flow({p.x, p.y, vv.x, vv.y}, 1.0);
    return Vec2{e[0], e[1]} - q;
  };
  Vec2 r = F(v, end);
  for (int it = 0; it < 40; ++it) {
    if (!std::isfinite(r.x) || !std::isfinite(r.y)) return false;
    if (norm(r) <= target) return true;
    const double d = 1e-7 * norm(v) + 1e-14;
    double J[2][2];
    Y tmp;
    for (int c = 0; c < 2; ++c) {
      Vec2 dv = c == 0 ? Vec2{d, 0} : Vec2{0, d};
      Vec2 rc = F(v + dv, tmp);
      J[0][c] = (rc.x - r.x) / d;
      J[1][c] = (rc.y - r.y) / d;
    }
    Vec2 step;
    if (!solve2(J, r, step)) return false;
    double lam = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      Y e2;
      Vec2 v2 = v - step * lam;
      Vec2 r2;
      try {
        r2 = F(v2, e2);
      } catch (const Error&) {
        lam *= 0.5;
        continue;
      }
      if (norm(r2) < norm(r)) {
        v = v2;
        r = r2;
        end = e2;
        improved = true;
        break;
      }
      lam *= 0.5;
    }
    if (!improved) return norm(r) <= 1e3 * target;
  }
  return norm(r) <= target;
}

// Discrete energy relaxation of a chart polyline, used to seed Newton when plain shooting fails.
Vec2 relaxed_initial_velocity(const Surface& S, Vec2 p, Vec2 q) {
  const int n = 64;
  std::vector<Vec2> x(n + 1);
  for (int k = 0; k <= n; ++k) x[k] = p + (q - p) * (double(k) / n);
  const double dt = 1.0 / n;
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double change = 0.0;
    for (int k = 1; k < n; ++k) {
      Vec2 vel = (x[k + 1] - x[k - 1]) / (2 * dt);
      Vec2 acc = S.christoffel(x[k]).contract(vel);
      Vec2 nx = (x[k + 1] + x[k - 1]) * 0.5 + acc * (0.5 * dt * dt);
      change = std::max(change, norm(nx - x[k]));
      x[k] = nx;
    }
    if (change < 1e-14) break;
  }
  return (x[0] * -3.0 + x[1] * 4.0 - x[2]) / (2 * dt);
}

}  // namespace

Segment connect_segment(const Surface& surface, Vec2 p, Vec2 q) {
  Segment seg;
  seg.a = p;
  seg.b = q;
  if (surface.is_flat() || norm(q - p) == 0.0) {
    seg.radial = true;
    seg.length = std::sqrt(surface.metric(p).inner(q - p, q - p));
    Vec2 d = seg.length > 0 ? (q - p) / norm(q - p) : Vec2{1.0, 0.0};
    seg.velocity = seg.end_velocity = surface.is_flat() ? d : surface.normalize(p, d);
    return seg;
  }
  // Meridian segments through the axis direction are chart-straight.
  if (std::abs(cross(p, q)) <= 1e-15 * (norm(p) * norm(q) + 1e-300) && dot(p, q) >= 0.0) {
    seg.radial = true;
    seg.length = std::abs(norm(q) - norm(p));
    seg.velocity = surface.normalize(p, q - p);
    seg.end_velocity = surface.normalize(q, q - p);
    return seg;
  }
  Integrator I(surface);
  Vec2 v = q - p;
  Y end;
  bool ok = false;
  try {
    ok = newton_connect(I, p, q, v, end);
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) {
    v = relaxed_initial_velocity(surface, p, q);
    try {
      ok = newton_connect(I, p, q, v, end);
    } catch (const Error&) {
      ok = false;
    }
  }
  if (!ok) throw Error(ErrorCode::NoConvergence, "connect: shooting and relaxation both failed");
  seg.length = surface.speed(p, v);
  seg.velocity = v / seg.length;
  seg.end_velocity = surface.normalize(q, {end[2], end[3]});
  return seg;
}

Segment drop_segment(const Surface& surface, Vec2 p) {
  auto pr = surface.project_to_boundary(p);
  Segment seg;
  seg.a = p;
  seg.b = pr.foot;
  seg.radial = true;
  seg.length = pr.distance;
  Vec2 d = pr.foot - p;
  if (norm(d) == 0.0) d = -surface.boundary_eval(pr.s).normal;
  seg.velocity = surface.normalize(p, d);
  seg.end_velocity = surface.normalize(pr.foot, d);
  return seg;
}

double angle_with_boundary(const Surface& surface, double s, Vec2 v) {
  auto fr = surface.boundary_eval(s);
  Sym2 g = surface.metric(fr.point);
  double c = g.inner(v, fr.tangent) / g.norm(v);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Vec2 launch_vector(const Surface& surface, double s, double psi) {
  auto fr = surface.boundary_eval(s);
  return fr.tangent * std::cos(psi) + fr.normal * std::sin(psi);
}

ShootResult shoot(const Surface& surface, Vec2 p, Vec2 w, double max_length, const SampleOptions& opt) {
  if (!surface.contains(p)) throw Error(ErrorCode::PointOutsideDomain, "shoot: start point outside the domain");
  if (std::abs(surface.speed(p, w) - 1.0) > 1e-9) throw Error(ErrorCode::ConfigInvalid, "shoot: direction is not unit");
  ShootCore core = shoot_core(surface, p, w, max_length);
  ShootResult res;
  res.path = sample_geodesic(surface, p, w, core.length, opt);
  if (core.hit) {
    res.exit = ExitKind::HitBoundary;
    res.s_exit = core.s_exit;
    res.path.samples.back() = core.end.x;
    res.path.velocities.back() = surface.normalize(core.end.x, core.end.v);
    res.exit_angle = angle_with_boundary(surface, core.s_exit, core.end.v);
  }
  return res;
}

GeodesicPath connect(const Surface& surface, Vec2 p, Vec2 q, const SampleOptions& opt) {
  if (!surface.contains(p) || !surface.contains(q))
    throw Error(ErrorCode::PointOutsideDomain, "connect: endpoint outside the domain");
  Segment seg = connect_segment(surface, p, q);
  GeodesicPath path = sample_segment(surface, seg, opt);
  for (const auto& x : path.samples)
    if (surface.boundary_function(x) < -1e-9) throw Error(ErrorCode::PathLeavesDomain, "connect: geodesic leaves the domain");
  return path;
}

GeodesicPath drop_to_boundary(const Surface& surface, Vec2 p, const SampleOptions& opt) {
  return sample_segment(surface, drop_segment(surface, p), opt);
}

GeodesicPath find_free_boundary_geodesic(const Surface& surface, double s_start, double angle, const SampleOptions& opt) {
  if (!(angle > 0.0 && angle < kPi)) throw Error(ErrorCode::ConfigInvalid, "seed angle must lie in (0, pi)");
  const double T = surface.boundary_length();
  auto residual = [&](double s, double psi, ShootCore& core) {
    Vec2 w = launch_vector(surface, s, psi);
    core = shoot_core(surface, surface.boundary_eval(s).point, w, 100.0 * surface.diameter());
    if (!core.hit) throw Error(ErrorCode::NoConvergence, "free boundary search: geodesic did not exit");
    auto fr = surface.boundary_eval(core.s_exit);
    Sym2 g = surface.metric(fr.point);
    return Vec2{std::cos(psi), g.inner(core.end.v, fr.tangent) / g.norm(core.end.v)};
  };
  double s = s_start, psi = angle, lambda = 1e-3;
  ShootCore core;
  Vec2 r = residual(s, psi, core);
  for (int it = 0; it < 200 && norm(r) > 1e-13; ++it) {
    const double d = 1e-7;
    ShootCore tmp;
    Vec2 rs = (residual(s + d, psi, tmp) - r) / d;
    Vec2 rp = (residual(s, psi + d, tmp) - r) / d;
    // Levenberg-Marquardt step on (s, psi)
    double A[2][2] = {{dot(rs, rs), dot(rs, rp)}, {dot(rs, rp), dot(rp, rp)}};
    Vec2 gvec = {dot(rs, r), dot(rp, r)};
    bool accepted = false;
    for (int k = 0; k < 30 && !accepted; ++k) {
      // additive floor keeps the step defined when a direction is flat (symmetric surfaces)
      const double floor_ = 1e-12 * (A[0][0] + A[1][1]) + 1e-30;
      double M[2][2] = {{A[0][0] * (1 + lambda) + lambda * floor_ + floor_, A[0][1]},
                        {A[1][0], A[1][1] * (1 + lambda) + lambda * floor_ + floor_}};
      Vec2 step;
      if (!solve2(M, gvec, step)) { lambda *= 10; continue; }
      double s2 = wrap_period(s - step.x, T), p2 = std::clamp(psi - step.y, 1e-6, kPi - 1e-6);
      ShootCore c2;
      Vec2 r2;
      try {
        r2 = residual(s2, p2, c2);
      } catch (const Error&) {
        lambda *= 10;
        continue;
      }
      if (norm(r2) < norm(r)) {
        s = s2;
        psi = p2;
        r = r2;
        core = c2;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
      } else {
        lambda *= 10;
      }
    }
    if (!accepted) break;
  }
  if (norm(r) > 1e-9) {
    // Fallback: leave orthogonally and root-find the exit cosine along the boundary,
    // scanning outward from the seed for the nearest sign change.
    psi = kPi / 2;
    auto f = [&](double ss, ShootCore& c) { return residual(wrap_period(ss, T), psi, c).y; };
    const int n = 400;
    const double ds = T / n;
    ShootCore c0, ca, cb;
    double f0 = f(s_start, c0);
    double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
    bool found = std::abs(f0) < 1e-13;
    if (found) {
      s = s_start;
      core = c0;
    }
    for (int k = 1; k <= n / 2 && !found; ++k) {
      for (int dir : {1, -1}) {
        double a = s_start + dir * (k - 1) * ds, b = s_start + dir * k * ds;
        double fa = f(a, ca), fb = f(b, cb);
        if (fa * fb <= 0.0) {
          lo = a, hi = b, flo = fa, fhi = fb;
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error(ErrorCode::NoConvergence, "free boundary geodesic search did not converge");
    if (!(std::abs(f0) < 1e-13)) {
      for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * T; ++it) {
        // bisection safeguarded secant
        double m = lo - flo * (hi - lo) / (fhi - flo);
        if (!(std::min(lo, hi) < m && m < std::max(lo, hi)) || it % 3 == 2) m = 0.5 * (lo + hi);
        double fm = f(m, core);
        s = m;
        if (std::abs(fm) < 1e-14) break;
        if ((fm < 0) == (flo < 0)) lo = m, flo = fm;
        else hi = m, fhi = fm;
      }
      s = wrap_period(s, T);
      r = residual(s, psi, core);
      if (std::abs(r.y) > 1e-9) throw Error(ErrorCode::NoConvergence, "free boundary geodesic search did not converge");
    }
  }
  Vec2 p0 = surface.boundary_eval(s).point;
  GeodesicPath path = sample_geodesic(surface, p0, launch_vector(surface, s, psi), core.length, opt);
  path.samples.back() = core.end.x;
  path.velocities.back() = surface.normalize(core.end.x, core.end.v);
  return path;
}

BoundaryLoop find_boundary_geodesic_loop(const Surface& surface, double seed_s, const SampleOptions& opt) {
  const double T = surface.boundary_length();
  const double max_len = 100.0 * surface.diameter();
  auto winding_excess = [&](double s, double psi, ShootCore& core) {
    core = shoot_core(surface, surface.boundary_eval(s).point, launch_vector(surface, s, psi), max_len);
    return std::abs(core.winding) - kTwoPi;
  };
  // Sweep of the launch angle at fixed vertex; first closing angle wins.
  const int n = 720;
  double prev_psi = 0.0, prev_w = 0.0;
  bool have_prev = false, found = false;
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < n; ++k) {
    double psi = kPi * (k + 0.5) / n;
    ShootCore c;
    double w = winding_excess(seed_s, psi, c);
    if (!c.hit) continue;
    if (have_prev && prev_w < 0.0 && w >= 0.0) {
      lo = prev_psi;
      hi = psi;
      found = true;
      break;
    }
    prev_psi = psi;
    prev_w = w;
    have_prev = true;
  }
  if (!found) throw Error(ErrorCode::NoLoopFound, "no launch angle closes a loop at this vertex");
  ShootCore core;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (winding_excess(seed_s, mid, core) < 0.0) lo = mid; else hi = mid;
  }
  double s = seed_s, psi = 0.5 * (lo + hi);
  // closure and angle-balance residuals
  auto residual = [&](double sv, double pv, ShootCore& c) {
    winding_excess(sv, pv, c);
    double gap = wrap_angle((c.s_exit - sv) / T * kTwoPi) * T / kTwoPi;
    auto fr = surface.boundary_eval(c.s_exit);
    Sym2 g = surface.metric(fr.point);
    Vec2 v1 = launch_vector(surface, sv, pv);
    double t1 = surface.metric(surface.boundary_eval(sv).point).inner(v1, surface.boundary_eval(sv).tangent);
    double t2 = -g.inner(c.end.v, fr.tangent) / g.norm(c.end.v);
    return Vec2{gap, t1 + t2};
  };
  Vec2 r = residual(s, psi, core);
  double lambda = 1e-6;
  for (int it = 0; it < 50 && norm(r) > 1e-13; ++it) {
    const double d = 1e-7;
    ShootCore tmp;
    Vec2 rs = (residual(s + d, psi, tmp) - r) / d;
    Vec2 rp = (residual(s, psi + d, tmp) - r) / d;
    double A[2][2] = {{dot(rs, rs), dot(rs, rp)}, {dot(rs, rp), dot(rp, rp)}};
    Vec2 gvec = {dot(rs, r), dot(rp, r)};
    bool accepted = false;
    for (int k = 0; k < 20 && !accepted; ++k) {
      // additive floor keeps the step defined when a direction is flat (symmetric surfaces)
      const double floor_ = 1e-12 * (A[0][0] + A[1][1]) + 1e-30;
      double M[2][2] = {{A[0][0] * (1 + lambda) + lambda * floor_ + floor_, A[0][1]},
                        {A[1][0], A[1][1] * (1 + lambda) + lambda * floor_ + floor_}};
      Vec2 step;
      if (!solve2(M, gvec, step)) { lambda *= 10; continue; }
      ShootCore c2;
      double s2 = wrap_period(s - step.x, T), p2 = psi - step.y;
      Vec2 r2 = residual(s2, p2, c2);
      if (norm(r2) < norm(r)) {
        s = s2; psi = p2; r = r2; core = c2;
        lambda = std::max(lambda * 0.1, 1e-14);
        accepted = true;
      } else {
        lambda *= 10;
      }
    }
    if (!accepted) break;
  }
  BoundaryLoop loop;
  loop.vertex_s = s;
  loop.launch_angle = psi;
  const Vec2 p0 = surface.boundary_eval(s).point;
  loop.path = sample_geodesic(surface, p0, launch_vector(surface, s, psi), core.length, opt);
  loop.closure_gap = norm(core.end.x - p0);
  loop.path.samples.back() = core.end.x;
  loop.path.velocities.back() = surface.normalize(core.end.x, core.end.v);
  loop.angle_start = angle_with_boundary(surface, s, loop.path.initial_velocity);
  loop.angle_end = angle_with_boundary(surface, core.s_exit, core.end.v);
  loop.tangential_residual = r.y;
  if (loop.closure_gap > 1e-8) throw Error(ErrorCode::NoLoopFound, "loop closure did not converge");
  return loop;
}

double second_variation_normal(const Surface& surface, const GeodesicPath& path) {
  const double tol = 1e-6;
  auto check_end = [&](Vec2 x, Vec2 v) {
    if (std::abs(surface.boundary_function(x)) > 1e-8)
      throw Error(ErrorCode::NotFreeBoundary, "endpoint is not on the boundary");
    double s = surface.project_to_boundary(x).s;
    if (std::abs(angle_with_boundary(surface, s, v) - kPi / 2) > tol)
      throw Error(ErrorCode::NotFreeBoundary, "geodesic does not meet the boundary orthogonally");
    return surface.boundary_eval(s).kg;
  };
  double kg0 = check_end(path.start, path.initial_velocity);
  double kg1 = check_end(path.end(), path.end_velocity());
  if (surface.is_flat()) return -kg0 - kg1;
  const int n = int(path.samples.size()) - 1;
  const double h = path.spacing();
  double integral = 0.0;
  for (int k = 0; k < n; ++k) {
    GeodesicState st = {path.samples[k], path.velocities[k]};
    integral += integrate_adaptive(
        [&](double t) { return surface.curvature(geodesic_flow(surface, st, t).x); }, 0.0, h, 1e-12 / n);
  }
  return -kg0 - kg1 - integral;
}

}  // namespace geonet
