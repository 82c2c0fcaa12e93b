#pragma once
// Independent reference computations used only by the tests.

#include <array>
#include <cmath>
#include <functional>

#include "geonet/surface.hpp"

namespace oracle {

using geonet::Christoffel;
using geonet::Sym2;
using geonet::Vec2;
using P3 = std::array<double, 3>;

inline P3 sphere_point(double R, double phi, double th) {
  return {R * std::sin(phi) * std::cos(th), R * std::sin(phi) * std::sin(th), R * std::cos(phi)};
}

inline double great_circle(double R, double phi1, double th1, double phi2, double th2) {
  P3 a = sphere_point(1.0, phi1, th1), b = sphere_point(1.0, phi2, th2);
  double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  double cx = a[1] * b[2] - a[2] * b[1], cy = a[2] * b[0] - a[0] * b[2], cz = a[0] * b[1] - a[1] * b[0];
  return R * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), c);
}

// First fundamental form of an embedding by central differences.
inline Sym2 embedding_metric(const std::function<P3(double, double)>& X, double a, double b, double h = 1e-6) {
  P3 xa, xb;
  P3 pa = X(a + h, b), ma = X(a - h, b), pb = X(a, b + h), mb = X(a, b - h);
  for (int i = 0; i < 3; ++i) {
    xa[i] = (pa[i] - ma[i]) / (2 * h);
    xb[i] = (pb[i] - mb[i]) / (2 * h);
  }
  auto d = [](const P3& p, const P3& q) { return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]; };
  return {d(xa, xa), d(xa, xb), d(xb, xb)};
}

// Unit cap blended into the line r = a u + b, written directly in the height u.
struct BlendedProfile {
  double rho, a, u0, b;
  BlendedProfile(double rho_, double a_) : rho(rho_), a(a_) {
    double phi0 = std::atan(1.0 / a);
    u0 = rho * (1 - std::cos(phi0));
    b = rho * std::sin(phi0) - a * u0;
  }
  double r(double u) const { return u <= u0 ? std::sqrt(2 * rho * u - u * u) : a * u + b; }
  double dr(double u) const { return u <= u0 ? (rho - u) / r(u) : a; }
  double ddr(double u) const {
    if (u > u0) return 0.0;
    double q = r(u);
    return -rho * rho / (q * q * q);
  }
  P3 point(double u, double th) const { return {r(u) * std::cos(th), r(u) * std::sin(th), u}; }
  double meridian_length(double u1, int n = 200000) const {
    // Simpson on the two smooth pieces of sqrt(1 + r'^2)
    auto f = [&](double u) { double d = dr(u); return std::sqrt(1 + d * d); };
    auto simpson = [&](double lo, double hi) {
      double h = (hi - lo) / n, acc = f(lo) + f(hi);
      for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
      return acc * h / 3.0;
    };
    // the cap piece has an integrable singularity at u = 0: use the closed form rho * acos(1 - u/rho)
    return rho * std::acos(1 - u0 / rho) + simpson(u0, u1);
  }
  // Geodesic curvature of the latitude circle at height u from the embedded curve.
  double latitude_kg_fd(double u) const {
    const double h = 1e-4;
    const double R = r(u);
    auto c = [&](double sg) { return point(u, sg / R); };
    P3 p = c(h), m = c(-h), z = c(0.0);
    P3 acc;
    for (int i = 0; i < 3; ++i) acc[i] = (p[i] - 2 * z[i] + m[i]) / (h * h);
    P3 up = point(u - 1e-6, 0.0), dn = point(u + 1e-6, 0.0), mer;
    double len = 0;
    for (int i = 0; i < 3; ++i) {
      mer[i] = up[i] - dn[i];
      len += mer[i] * mer[i];
    }
    len = std::sqrt(len);
    double kg = 0;
    for (int i = 0; i < 3; ++i) kg += acc[i] * mer[i] / len;
    return kg;
  }
};

inline Christoffel christoffel_fd(const geonet::Surface& s, Vec2 p, double h) {
  double dg[2][2][2];
  for (int k = 0; k < 2; ++k) {
    Vec2 e = k == 0 ? Vec2{h, 0} : Vec2{0, h};
    Sym2 gp = s.metric(p + e), gm = s.metric(p - e);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dg[k][i][j] = (gp.at(i, j) - gm.at(i, j)) / (2 * h);
  }
  Sym2 gi = s.metric(p).inverse();
  Christoffel G;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = 0;
        for (int l = 0; l < 2; ++l) acc += gi.at(k, l) * 0.5 * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        G.g[k][i][j] = acc;
      }
  return G;
}

inline double det3(double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Brioschi formula with metric derivatives by finite differences.
inline double brioschi_fd(const geonet::Surface& s, Vec2 p, double h) {
  auto g = [&](double du, double dv) { return s.metric({p.x + du, p.y + dv}); };
  Sym2 c = g(0, 0), up = g(h, 0), um = g(-h, 0), vp = g(0, h), vm = g(0, -h);
  Sym2 pp = g(h, h), pm = g(h, -h), mp = g(-h, h), mm = g(-h, -h);
  double E = c.xx, F = c.xy, G = c.yy;
  double Eu = (up.xx - um.xx) / (2 * h), Ev = (vp.xx - vm.xx) / (2 * h);
  double Fu = (up.xy - um.xy) / (2 * h), Fv = (vp.xy - vm.xy) / (2 * h);
  double Gu = (up.yy - um.yy) / (2 * h), Gv = (vp.yy - vm.yy) / (2 * h);
  double Evv = (vp.xx - 2 * E + vm.xx) / (h * h);
  double Guu = (up.yy - 2 * G + um.yy) / (h * h);
  double Fuv = (pp.xy - pm.xy - mp.xy + mm.xy) / (4 * h * h);
  double A[3][3] = {{-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev}, {Fv - 0.5 * Gu, E, F}, {0.5 * Gv, F, G}};
  double B[3][3] = {{0, 0.5 * Ev, 0.5 * Gu}, {0.5 * Ev, E, F}, {0.5 * Gu, F, G}};
  double W = E * G - F * F;
  return (det3(A) - det3(B)) / (W * W);
}

}  // namespace oracle
