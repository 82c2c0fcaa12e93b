#include <numeric>

#include "doctest.h"
#include "geonet/network.hpp"

using namespace geonet;

namespace {

GeodesicNetwork y_network(const Surface& d, double twist = 0.0) {
  GeodesicNetwork net;
  for (int k = 0; k < 3; ++k) {
    double a = kPi / 2 + kTwoPi * k / 3 + (k == 2 ? twist : 0.0);
    net.add(connect(d, {0, 0}, unit_from_angle(a)));
  }
  return net;
}

GeodesicNetwork diameters(const Surface& d, std::vector<double> angles, int mult = 1) {
  GeodesicNetwork net;
  for (double a : angles) net.add(connect(d, -unit_from_angle(a), unit_from_angle(a)), mult);
  return net;
}

const JunctionReport& find_junction(const std::vector<JunctionReport>& js, Vec2 p) {
  for (const auto& j : js)
    if (norm(j.location - p) < 1e-8) return j;
  throw std::runtime_error("junction not found");
}

}  // namespace

TEST_CASE("junction balance") {
  Surface d = Surface::disk();
  auto js = check_stationarity(d, y_network(d), 1e-8);
  REQUIRE(js.size() == 4);
  const auto& c = find_junction(js, {0, 0});
  CHECK(c.density == 1.5);
  CHECK(c.residual < 1e-15);
  CHECK(c.pass);
  CHECK(c.classification == JunctionClass::NonAdmissible);
  for (const auto& j : js)
    if (j.on_boundary) {
      CHECK(j.density == 0.5);
      CHECK(j.residual < 1e-15);
      CHECK(j.classification == JunctionClass::Regular);
    }

  auto bent = check_stationarity(d, y_network(d, 0.1), 1e-6);
  const auto& b = find_junction(bent, {0, 0});
  CHECK(b.residual == doctest::Approx(2 * std::sin(0.05)).epsilon(1e-12));
  CHECK_FALSE(b.pass);

  auto cross = check_stationarity(d, diameters(d, {0.0, kPi / 2}), 1e-8);
  const auto& x = find_junction(cross, {0, 0});
  CHECK(x.density == 2.0);
  CHECK(x.crossing);
  CHECK(x.classification == JunctionClass::CrossingCandidate);
  CHECK(cross.size() == 5);

  GeodesicNetwork dangling;
  dangling.add(connect(d, {0, 0}, {1, 0}));
  CHECK_THROWS_AS(check_stationarity(d, dangling, 1e-8), Error);
}

TEST_CASE("boundary loop vertex") {
  Surface rev = Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5);
  auto loop = find_boundary_geodesic_loop(rev, 0.0);
  GeodesicNetwork net;
  net.add(loop.path);
  auto js = check_stationarity(rev, net, 1e-8);
  REQUIRE(js.size() == 1);
  CHECK(js[0].on_boundary);
  CHECK(js[0].density == 1.0);
  CHECK(js[0].classification == JunctionClass::BoundaryLoop);
  CHECK(js[0].pass);

  auto sub = build_subdivision(rev, net);
  REQUIRE(sub.faces.size() == 2);
  const double psi = loop.launch_angle;
  for (const auto& f : sub.faces) {
    CHECK(f.euler_char == 1);
    CHECK(gauss_bonnet_audit(rev, f) < 1e-4);
    double turning = std::accumulate(f.turning_angles.begin(), f.turning_angles.end(), 0.0);
    if (f.boundary_arcs.empty()) CHECK(turning == doctest::Approx(2 * psi).epsilon(1e-6));
    else CHECK(turning == doctest::Approx(2 * (kPi - psi)).epsilon(1e-6));
  }
  CHECK(sub.faces[0].area + sub.faces[1].area == doctest::Approx(rev.area()).epsilon(1e-6));
}

TEST_CASE("faces of simple disk networks") {
  Surface d = Surface::disk();
  auto half = extract_faces(d, diameters(d, {0.0}));
  REQUIRE(half.size() == 2);
  for (const auto& f : half) {
    CHECK(f.area == doctest::Approx(kPi / 2).epsilon(1e-6));
    CHECK(f.euler_char == 1);
    CHECK(check_star_property(f).ok);
    auto t = gauss_bonnet_terms(d, f);
    CHECK(t.boundary_kg == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(t.turning == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(t.residual < 1e-12);
  }

  auto ys = extract_faces(d, y_network(d));
  CHECK(ys.size() == 3);
  for (const auto& f : ys) {
    CHECK(f.area == doctest::Approx(kPi / 3).epsilon(1e-6));
    CHECK(check_star_property(f).ok);
    CHECK(gauss_bonnet_audit(d, f) < 1e-12);
  }

  auto four = extract_faces(d, diameters(d, {0.3, 0.3 + kPi / 2}));
  CHECK(four.size() == 4);
  for (const auto& f : four) CHECK(gauss_bonnet_audit(d, f) < 1e-12);

  auto empty = extract_faces(d, GeodesicNetwork{});
  REQUIRE(empty.size() == 1);
  auto te = gauss_bonnet_terms(d, empty[0]);
  CHECK(te.boundary_kg == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(te.residual < 1e-12);
  CHECK(empty[0].area == doctest::Approx(kPi).epsilon(1e-6));

  // chord meeting the circle at 0.1 pi: the large side has boundary corners of 0.9 pi
  GeodesicNetwork chord;
  chord.add(connect(d, unit_from_angle(-0.1 * kPi), unit_from_angle(0.1 * kPi)));
  auto cf = extract_faces(d, chord);
  REQUIRE(cf.size() == 2);
  int bad = 0;
  for (const auto& f : cf) {
    auto sc = check_star_property(f);
    if (!sc.ok) {
      ++bad;
      CHECK(sc.violations.size() == 2);
      for (const auto& c : f.corners)
        if (c.geodesic_meets_boundary) CHECK(c.interior == doctest::Approx(0.9 * kPi).epsilon(1e-9));
    }
  }
  CHECK(bad == 1);
}

TEST_CASE("Gauss-Bonnet on curved faces") {
  Surface cap = Surface::spherical_cap(1.0, kPi / 3);
  GeodesicNetwork net;
  net.add(find_free_boundary_geodesic(cap, 0.4, kPi / 2));
  auto faces = extract_faces(cap, net);
  REQUIRE(faces.size() == 2);
  for (const auto& f : faces) {
    auto t = gauss_bonnet_terms(cap, f);
    CHECK(t.curvature == doctest::Approx(kPi * (1 - std::cos(kPi / 3))).epsilon(1e-7));
    CHECK(t.residual < 1e-4);
  }
  auto whole = extract_faces(cap, GeodesicNetwork{});
  auto tw = gauss_bonnet_terms(cap, whole[0]);
  CHECK(tw.curvature == doctest::Approx(kTwoPi * (1 - std::cos(kPi / 3))).epsilon(1e-8));
  CHECK(tw.boundary_kg == doctest::Approx(kTwoPi * std::cos(kPi / 3)).epsilon(1e-12));

  Surface rev = Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5);
  GeodesicNetwork m;
  m.add(find_free_boundary_geodesic(rev, 0.0, kPi / 2));
  for (const auto& f : extract_faces(rev, m)) CHECK(gauss_bonnet_audit(rev, f) < 1e-4);

  Surface tri = Surface::equilateral_triangle(1.0, 0.03);
  GeodesicNetwork h;
  h.add(find_free_boundary_geodesic(tri, tri.boundary_length() / 6, kPi / 2));
  double total = 0.0;
  for (const auto& f : extract_faces(tri, h)) {
    CHECK(gauss_bonnet_audit(tri, f) < 1e-10);
    total += f.area;
  }
  CHECK(total == doctest::Approx(tri.area()).epsilon(1e-6));
}

TEST_CASE("parity decomposition") {
  Surface d = Surface::disk();
  auto s1 = build_subdivision(d, diameters(d, {0.0}));
  auto p1 = parity_decomposition(s1);
  CHECK(p1.I.size() == 1);
  CHECK(p1.J.size() == 1);
  CHECK(p1.gamma.size() == 1);
  CHECK(parity_identity_holds(s1, p1));

  auto s2 = build_subdivision(d, diameters(d, {0.0}, 2));
  auto p2 = parity_decomposition(s2);
  CHECK(p2.I.size() == 2);
  CHECK(p2.J.empty());
  CHECK(p2.gamma.empty());
  CHECK(parity_identity_holds(s2, p2));

  auto s4 = build_subdivision(d, diameters(d, {0.0, kPi / 2}));
  auto p4 = parity_decomposition(s4);
  CHECK(p4.I.size() == 2);
  CHECK(p4.J.size() == 2);
  CHECK(p4.gamma.size() == 4);
  CHECK(parity_identity_holds(s4, p4));
  // checkerboard: faces sharing an edge differ
  for (const auto& e : s4.edges)
    if (!e.on_boundary) CHECK(p4.color[e.left_face] != p4.color[e.right_face]);

  try {
    parity_decomposition(d, y_network(d));
    FAIL("expected ParityInconsistency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParityInconsistency);
  }
}

TEST_CASE("mass and hypotheses") {
  Surface d = Surface::disk();
  CHECK(mass(diameters(d, {0.0})) == doctest::Approx(2.0));
  CHECK(mass(diameters(d, {0.0}, 2)) == doctest::Approx(4.0));
  CHECK(mass(y_network(d)) == doctest::Approx(3.0));

  auto hy = check_hypotheses(d, y_network(d));
  CHECK_FALSE(hy.integer_density);
  CHECK(hy.components == 1);
  CHECK(hy.touches_boundary);

  auto hx = check_hypotheses(d, diameters(d, {0.0, kPi / 2}));
  CHECK(hx.all());
  CHECK(hx.components == 1);

  GeodesicNetwork two;
  two.add(connect(d, unit_from_angle(-0.5), unit_from_angle(0.5)));
  two.add(connect(d, unit_from_angle(kPi - 0.5), unit_from_angle(kPi + 0.5)));
  auto h2 = check_hypotheses(d, two);
  CHECK(h2.components == 2);
  CHECK_FALSE(h2.boundary_angles);
}

TEST_CASE("overlapping segments are rejected") {
  Surface d = Surface::disk();
  GeodesicNetwork net;
  net.add(connect(d, {-1, 0}, {1, 0}));
  net.add(connect(d, {-1, 0}, {1, 0}));
  CHECK_THROWS_AS(build_subdivision(d, net), Error);
}
