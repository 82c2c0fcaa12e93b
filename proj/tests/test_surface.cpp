#include <random>

#include "doctest.h"
#include "geonet/surface.hpp"
#include "oracles.hpp"

using namespace geonet;
using namespace oracle;

TEST_CASE("flat disk metric data is Euclidean") {
  Surface d = Surface::disk();
  Sym2 g = d.metric_at({0.3, 0.1});
  CHECK(g.xx == 1.0);
  CHECK(g.xy == 0.0);
  CHECK(g.yy == 1.0);
  Christoffel G = d.christoffel_at({0.3, 0.1});
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(G.g[k][i][j] == 0.0);
  CHECK(d.gauss_curvature_at({0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(d.metric_at({1.5, 0.0}), Error);
}

TEST_CASE("disk boundary frame") {
  Surface d = Surface::disk();
  auto f = d.boundary_eval(0.0);
  CHECK(f.point.x == doctest::Approx(1.0));
  CHECK(f.point.y == doctest::Approx(0.0));
  CHECK(f.tangent.y == doctest::Approx(1.0));
  CHECK(f.normal.x == doctest::Approx(-1.0));
  CHECK(f.kg == doctest::Approx(1.0));
  auto g = d.boundary_eval(kPi);
  CHECK(g.point.x == doctest::Approx(-1.0));
  CHECK(g.normal.x == doctest::Approx(1.0));
  CHECK(d.boundary_length() == doctest::Approx(kTwoPi));
}

TEST_CASE("disk projection") {
  Surface d = Surface::disk();
  auto p = d.project_to_boundary({0.5, 0.0});
  CHECK(p.s == doctest::Approx(0.0));
  CHECK(p.distance == doctest::Approx(0.5));
  auto c = d.project_to_boundary({0.0, 0.0});
  CHECK(c.distance == doctest::Approx(1.0));
  CHECK(c.s == doctest::Approx(0.0));
}

TEST_CASE("spherical cap polar data") {
  Surface cap = Surface::spherical_cap(1.0, kPi / 3);
  for (double phi : {0.2, 0.6, 1.0}) {
    Sym2 g = cap.polar_metric(phi);
    Sym2 ref = embedding_metric([](double a, double b) { return sphere_point(1.0, a, b); }, phi, 0.3);
    CHECK(g.xx == doctest::Approx(1.0));
    CHECK(g.yy == doctest::Approx(std::sin(phi) * std::sin(phi)));
    CHECK(g.xx == doctest::Approx(ref.xx).epsilon(1e-8));
    CHECK(g.yy == doctest::Approx(ref.yy).epsilon(1e-8));
    Christoffel G = cap.polar_christoffel(phi);
    CHECK(G.g[0][1][1] == doctest::Approx(-std::sin(phi) * std::cos(phi)));
    CHECK(G.g[1][0][1] == doctest::Approx(std::cos(phi) / std::sin(phi)));
    CHECK(G.g[0][0][0] == 0.0);
  }
  Surface cap2 = Surface::spherical_cap(2.0, 1.0);
  CHECK(cap2.gauss_curvature_at({0.3, 0.4}) == doctest::Approx(0.25));
}

TEST_CASE("spherical cap projection agrees with dense boundary sampling") {
  Surface cap = Surface::spherical_cap(1.0, kPi / 3);
  Vec2 p = cap.from_polar(kPi / 6, 0.0);
  auto pr = cap.project_to_boundary(p);
  CHECK(pr.distance == doctest::Approx(kPi / 6).epsilon(1e-12));
  double best = 1e9;
  for (int k = 0; k < 20000; ++k) {
    double th = kTwoPi * k / 20000;
    best = std::min(best, great_circle(1.0, kPi / 6, 0.0, kPi / 3, th));
  }
  CHECK(pr.distance == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("revolution polar metric matches the embedding") {
  Surface rev = Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5);
  BlendedProfile bp(1.0, 0.2);
  for (double u : {0.1, 0.5, 0.9, 2.0, 3.0}) {
    Sym2 g = rev.polar_metric(u);
    Sym2 ref = embedding_metric([&](double a, double b) { return bp.point(a, b); }, u, 1.1);
    CHECK(g.xx == doctest::Approx(ref.xx).epsilon(1e-7));
    CHECK(g.yy == doctest::Approx(ref.yy).epsilon(1e-7));
    CHECK(std::abs(g.xy) < 1e-12);
    double r = bp.r(u), dr = bp.dr(u), ddr = bp.ddr(u);
    Christoffel G = rev.polar_christoffel(u);
    CHECK(G.g[0][0][0] == doctest::Approx(dr * ddr / (1 + dr * dr)).epsilon(1e-7));
    CHECK(G.g[0][1][1] == doctest::Approx(-r * dr / (1 + dr * dr)).epsilon(1e-7));
    CHECK(G.g[1][0][1] == doctest::Approx(dr / r).epsilon(1e-7));
  }
}

TEST_CASE("revolution curvature and boundary geodesic curvature") {
  Surface rev = Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5);
  BlendedProfile bp(1.0, 0.2);
  CHECK(rev.gauss_curvature_at(rev.from_polar(0.3, 0.0)) == doctest::Approx(1.0));
  CHECK(rev.gauss_curvature_at(rev.from_polar(2.5, 1.0)) == 0.0);
  double u1 = (1.5 - bp.b) / 0.2;
  CHECK(rev.profile().boundary_radius() == doctest::Approx(1.5).epsilon(1e-14));
  double dr = bp.dr(u1);
  double expect = dr / (1.5 * std::sqrt(1 + dr * dr));
  auto fr = rev.boundary_eval(0.7);
  CHECK(fr.kg == doctest::Approx(expect).epsilon(1e-12));
  // finite-difference curvature of the latitude circle in the embedding
  CHECK(fr.kg == doctest::Approx(bp.latitude_kg_fd(u1)).epsilon(1e-6));
}

TEST_CASE("azimuthal chart agrees with the meridian chart") {
  for (const Surface& s : {Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5), Surface::spherical_cap(1.3, 1.2)}) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto& pr = s.profile();
    for (int k = 0; k < 200; ++k) {
      double rad = pr.s_boundary * std::sqrt(U(rng)) * 0.999 + 1e-3;
      double th = kTwoPi * U(rng);
      Vec2 x = unit_from_angle(th) * rad;
      // Jacobian of (x, y) -> (native, theta)
      double n = pr.native_of_s(rad);
      double dn = 1e-7;
      double dsdn = (pr.s_of_native(n + dn) - pr.s_of_native(n - dn)) / (2 * dn);
      Sym2 gp = s.polar_metric(n);
      // polar metric pulled back: g = gp_nn (dn/ds)^2 e e^T + r^2 / s^2 (I - e e^T)
      Vec2 e = unit_from_angle(th);
      double a = gp.xx / (dsdn * dsdn);
      double b = gp.yy / (rad * rad);
      Sym2 ref = {b + (a - b) * e.x * e.x, (a - b) * e.x * e.y, b + (a - b) * e.y * e.y};
      Sym2 g = s.metric(x);
      CHECK(g.xx == doctest::Approx(ref.xx).epsilon(1e-6));
      CHECK(g.xy == doctest::Approx(ref.xy).epsilon(1e-6).scale(1.0));
      CHECK(g.yy == doctest::Approx(ref.yy).epsilon(1e-6));
    }
  }
}

TEST_CASE("metric, Christoffel and curvature invariants on random samples") {
  std::vector<Surface> surfaces = {Surface::disk(), Surface::equilateral_triangle(1.0, 0.02),
                                   Surface::rounded_sector(1.0, 2 * kPi / 5, 0.02), Surface::spherical_cap(1.0, kPi / 3),
                                   Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5)};
  for (const auto& s : surfaces) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int checked = 0;
    double max_ch = 0.0, max_k = 0.0;
    while (checked < 1000) {
      Vec2 p = {U(rng) * s.diameter(), U(rng) * s.diameter()};
      if (!s.contains(p, 0.0)) continue;
      if (!s.is_flat() && !s.profile().sphere && std::abs(norm(p) - s.profile().s_blend) < 2e-3) continue;
      ++checked;
      Sym2 g = s.metric_at(p);
      REQUIRE(g.xx > 0);
      REQUIRE(g.det() > 0);
      Christoffel G = s.christoffel_at(p);
      Christoffel F = christoffel_fd(s, p, 1e-5);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            CHECK(G.g[k][i][j] == G.g[k][j][i]);
            max_ch = std::max(max_ch, std::abs(G.g[k][i][j] - F.g[k][i][j]) / (1.0 + std::abs(F.g[k][i][j])));
          }
      double K = s.gauss_curvature_at(p);
      CHECK(K >= -1e-9);
      max_k = std::max(max_k, std::abs(K - brioschi_fd(s, p, 1e-3)));
    }
    CHECK(max_ch < 1e-6);
    CHECK(max_k < 1e-5);
  }
}

TEST_CASE("boundary convexity and projection alignment") {
  std::vector<Surface> surfaces = {Surface::disk(), Surface::equilateral_triangle(1.0, 0.02),
                                   Surface::rounded_sector(1.0, 2 * kPi / 5, 0.02), Surface::spherical_cap(1.0, kPi / 3),
                                   Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5)};
  for (const auto& s : surfaces) {
    const double kmin = s.min_boundary_curvature();
    for (int k = 0; k < 1000; ++k) {
      auto f = s.boundary_eval(s.boundary_length() * k / 1000.0);
      Sym2 g = s.metric(f.point);
      CHECK(g.norm(f.tangent) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(g.norm(f.normal) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(g.inner(f.tangent, f.normal)) < 1e-12);
      CHECK(f.kg >= kmin);
      // a point pushed inward along the normal projects back to the same foot
      Vec2 p = f.point + f.normal * 0.01;
      if (!s.contains(p, 0.0)) continue;
      auto pr = s.project_to_boundary(p);
      auto fb = s.boundary_eval(pr.s);
      Vec2 dir = (fb.point - p) / norm(fb.point - p);
      CHECK(std::abs(s.metric(fb.point).inner(dir, fb.tangent)) < 1e-6);
    }
    CHECK(kmin >= 0.0);
  }
}

TEST_CASE("rounded polygon and sector areas") {
  const double rho = 0.05;
  Surface t = Surface::equilateral_triangle(1.0, rho);
  CHECK(t.area() == doctest::Approx(1.0 - 3 * rho * rho * (std::sqrt(3.0) - kPi / 3)).epsilon(1e-12));
  Surface sec = Surface::rounded_sector(1.0, 2 * kPi / 5, 0.0);
  CHECK(sec.area() == doctest::Approx(kPi / 5).epsilon(1e-12));
  CHECK(sec.boundary_length() == doctest::Approx(2.0 + 2 * kPi / 5).epsilon(1e-12));
  Surface rs = Surface::rounded_sector(1.0, 2 * kPi / 5, 0.02);
  CHECK(rs.area() < kPi / 5);
  CHECK(rs.area() > kPi / 5 - 0.01);
  // boundary is closed and continuous
  const auto& dom = rs.flat_domain();
  for (size_t i = 0; i < dom.pieces.size(); ++i) {
    const auto& a = dom.pieces[i];
    const auto& b = dom.pieces[(i + 1) % dom.pieces.size()];
    CHECK(norm(a.point(a.length) - b.point(0.0)) < 1e-12);
    CHECK(norm(a.tangent(a.length) - b.tangent(0.0)) < 1e-9);
  }
}

TEST_CASE("surface descriptors round trip") {
  Surface a = Surface::from_descriptor(R"({"kind":"SurfaceOfRevolution","params":{"cap_radius":1,"slope":0.2,"boundary_radius":1.5}})");
  Surface b = Surface::from_descriptor(a.descriptor());
  CHECK(b.boundary_length() == doctest::Approx(kTwoPi * 1.5).epsilon(1e-13));
  CHECK_THROWS_AS(Surface::from_descriptor(R"({"kind":"Torus"})"), Error);
  CHECK_THROWS_AS(Surface::from_descriptor("not json"), Error);
  Surface c = Surface::from_descriptor(R"({"kind":"FlatConvexDomain","params":{"shape":"sector","angle":1.2566370614359172}})");
  CHECK(c.area() == doctest::Approx(kPi / 5).epsilon(1e-12));
}
