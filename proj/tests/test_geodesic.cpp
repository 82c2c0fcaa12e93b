#include <chrono>
#include <random>

#include "doctest.h"
#include "geonet/geodesic.hpp"
#include "oracles.hpp"

using namespace geonet;
using namespace oracle;

namespace {

Surface revolution() { return Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5); }
Surface cap() { return Surface::spherical_cap(1.0, kPi / 3); }

// Slant distance from the virtual cone apex for a point on the conical part.
double cone_slant(const Surface& s, Vec2 p) {
  const auto& pr = s.profile();
  return pr.r(norm(p)) / pr.tail_rate;
}

}  // namespace

TEST_CASE("shoot in the flat disk") {
  Surface d = Surface::disk();
  auto r = shoot(d, {0, 0}, {1, 0}, 2.0);
  CHECK(r.exit == ExitKind::HitBoundary);
  CHECK(r.path.length == doctest::Approx(1.0));
  CHECK(r.exit_angle == doctest::Approx(kPi / 2));
  CHECK(norm(r.path.end() - Vec2{1, 0}) < 1e-12);

  const double eps = 1e-3;
  auto t = shoot(d, {-1 + eps, 0}, {0, 1}, 2.0);
  double half = std::sqrt(1 - (1 - eps) * (1 - eps));
  CHECK(t.path.length == doctest::Approx(half).epsilon(1e-12));
  CHECK(t.path.end().x == doctest::Approx(-1 + eps));
  CHECK(t.path.end().y == doctest::Approx(half));

  auto u = shoot(d, {0, 0}, {0, 1}, 0.5);
  CHECK(u.exit == ExitKind::ReachedLength);
  CHECK(u.path.length == doctest::Approx(0.5));
}

TEST_CASE("meridian shot across the spherical cap") {
  Surface c = cap();
  auto fr = c.boundary_eval(0.0);
  auto r = shoot(c, fr.point, fr.normal, 10.0);
  REQUIRE(r.exit == ExitKind::HitBoundary);
  CHECK(r.path.length == doctest::Approx(2 * kPi / 3).epsilon(1e-10));
  CHECK(r.s_exit == doctest::Approx(c.boundary_length() / 2).epsilon(1e-8));
  CHECK(r.exit_angle == doctest::Approx(kPi / 2).epsilon(1e-8));
  CHECK(norm(r.path.end() - c.boundary_eval(r.s_exit).point) < 1e-8);
}

TEST_CASE("connect examples") {
  Surface d = Surface::disk();
  CHECK(connect(d, {-1, 0}, {1, 0}).length == doctest::Approx(2.0));
  CHECK(connect(d, {0, 0}, {0.5, 0}).length == doctest::Approx(0.5));

  Surface c = cap();
  for (double dth : {0.3, 1.0, 2.0, 3.0}) {
    auto p = c.from_polar(kPi / 3, 0.1), q = c.from_polar(kPi / 3, 0.1 + dth);
    auto path = connect(c, p, q);
    CHECK(path.length == doctest::Approx(great_circle(1.0, kPi / 3, 0.1, kPi / 3, 0.1 + dth)).epsilon(1e-10));
    CHECK(norm(path.end() - q) < 1e-8);
  }
}

TEST_CASE("connect on the conical tail matches the unrolled cone") {
  Surface rev = revolution();
  const auto& pr = rev.profile();
  const double sin_a = pr.tail_rate;
  const double junction = pr.r_blend / sin_a;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int tested = 0;
  while (tested < 30) {
    double u1 = 2.0 + 1.3 * U(rng), u2 = 2.0 + 1.3 * U(rng);
    double th1 = kTwoPi * U(rng), th2 = th1 + 0.8 * (U(rng) - 0.5);
    Vec2 p = rev.from_polar(u1, th1), q = rev.from_polar(u2, th2);
    double l1 = cone_slant(rev, p), l2 = cone_slant(rev, q);
    double phi = (th2 - th1) * sin_a;
    Vec2 P{l1, 0}, Q{l2 * std::cos(phi), l2 * std::sin(phi)};
    // the unrolled segment must avoid the cap
    double t = std::clamp(-dot(P, Q - P) / dot(Q - P, Q - P), 0.0, 1.0);
    if (norm(P + (Q - P) * t) < junction + 0.05) continue;
    ++tested;
    auto path = connect(rev, p, q);
    CHECK(path.length == doctest::Approx(norm(Q - P)).epsilon(1e-10));
    CHECK(connect(rev, q, p).length == doctest::Approx(path.length).epsilon(1e-9));
  }
}

TEST_CASE("drop to boundary") {
  Surface d = Surface::disk();
  auto p = drop_to_boundary(d, {0.25, 0});
  CHECK(p.length == doctest::Approx(0.75));
  CHECK(norm(p.end() - Vec2{1, 0}) < 1e-12);

  const double rho = 0.01;
  Surface tri = Surface::equilateral_triangle(1.0, rho);
  double a = std::sqrt(4.0 / std::sqrt(3.0));
  double inradius = a / (2 * std::sqrt(3.0));
  auto q = drop_to_boundary(tri, {0, inradius});
  CHECK(q.length == doctest::Approx(inradius).epsilon(1e-12));
  CHECK(norm(q.end() - Vec2{0, 0}) < 1e-12);

  Surface rev = revolution();
  BlendedProfile bp(1.0, 0.2);
  double u1 = (1.5 - bp.b) / 0.2;
  Vec2 x = rev.from_polar(0.05, 0.0);
  auto m = drop_to_boundary(rev, x);
  double expect = bp.meridian_length(u1) - 1.0 * std::acos(1 - 0.05);
  CHECK(m.length == doctest::Approx(expect).epsilon(1e-9));
  double s = rev.project_to_boundary(m.end() * (1 - 1e-15)).s;
  CHECK(std::abs(angle_with_boundary(rev, s, m.end_velocity()) - kPi / 2) < 1e-6);
}

TEST_CASE("sampled paths satisfy the geodesic equation and spacing") {
  Surface rev = revolution();
  SampleOptions opt;
  opt.spacing = 1e-3;
  auto fr = rev.boundary_eval(0.4);
  auto r = shoot(rev, fr.point, launch_vector(rev, 0.4, 0.9), 20.0, opt);
  REQUIRE(r.exit == ExitKind::HitBoundary);
  const auto& P = r.path;
  const double h = P.spacing();
  double worst = 0.0;
  // the last sample is the located exit point, not a grid point
  for (size_t k = 1; k + 2 < P.samples.size(); ++k) {
    Vec2 x = P.samples[k];
    if (std::abs(norm(x) - rev.profile().s_blend) < 3 * h) continue;
    Vec2 vel = (P.samples[k + 1] - P.samples[k - 1]) / (2 * h);
    Vec2 acc = (P.samples[k + 1] - P.samples[k] * 2.0 + P.samples[k - 1]) / (h * h);
    worst = std::max(worst, norm(acc + rev.christoffel(x).contract(vel)));
    CHECK(rev.contains(x, 1e-12));
  }
  CHECK(worst < 1e-6);
  CHECK(norm(geodesic_flow(rev, {P.start, P.initial_velocity}, P.length).x - P.end()) < 1e-9);
  for (size_t k = 0; k + 1 < P.samples.size(); k += 37)
    CHECK(std::abs(connect_segment(rev, P.samples[k], P.samples[k + 1]).length - h) < 1e-9 * P.length);
}

TEST_CASE("shooting is reversible") {
  for (const Surface& s : {revolution(), cap()}) {
    auto fr = s.boundary_eval(1.0);
    auto r = shoot(s, fr.point + fr.normal * 0.0, launch_vector(s, 1.0, 1.1), 50.0);
    auto back = shoot(s, r.path.end(), -r.path.end_velocity(), r.path.length + 1.0);
    CHECK(norm(back.path.end() - fr.point) < 1e-6);
  }
}

TEST_CASE("free boundary geodesics") {
  Surface d = Surface::disk();
  auto g = find_free_boundary_geodesic(d, 0.0, kPi / 2 + 0.01);
  CHECK(g.length == doctest::Approx(2.0).epsilon(1e-10));

  Surface c = cap();
  auto m = find_free_boundary_geodesic(c, 0.3, 1.4);
  CHECK(m.length == doctest::Approx(2 * kPi / 3).epsilon(1e-9));

  Surface rev = revolution();
  BlendedProfile bp(1.0, 0.2);
  double u1 = (1.5 - bp.b) / 0.2;
  auto mr = find_free_boundary_geodesic(rev, 0.0, 1.5);
  CHECK(mr.length == doctest::Approx(2 * bp.meridian_length(u1)).epsilon(1e-9));

  Surface tri = Surface::equilateral_triangle(1.0, 0.01);
  auto h = find_free_boundary_geodesic(tri, tri.boundary_length() / 6, 1.5);
  // altitude ending on the corner arc, whose center sits 2 rho below the sharp apex
  double side = std::sqrt(4.0 / std::sqrt(3.0));
  CHECK(h.length == doctest::Approx(side * std::sqrt(3.0) / 2 - 0.01).epsilon(1e-10));
  CHECK(std::abs(angle_with_boundary(tri, tri.project_to_boundary(h.start).s, h.initial_velocity) - kPi / 2) < 1e-6);
  CHECK(std::abs(angle_with_boundary(tri, tri.project_to_boundary(h.end()).s, h.end_velocity()) - kPi / 2) < 1e-6);
}

TEST_CASE("boundary geodesic loops") {
  CHECK_THROWS_AS(find_boundary_geodesic_loop(Surface::disk(), 0.0), Error);
  try {
    find_boundary_geodesic_loop(cap(), 0.0);
    FAIL("expected NoLoopFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoLoopFound);
  }
  Surface rev = revolution();
  auto loop = find_boundary_geodesic_loop(rev, 0.0);
  const double sin_a = rev.profile().tail_rate;
  const double R = 1.5 / sin_a;
  const double psi = kPi * sin_a;
  CHECK(loop.closure_gap < 1e-8);
  CHECK(std::abs(loop.angle_start - loop.angle_end) < 1e-6);
  CHECK(loop.launch_angle == doctest::Approx(psi).epsilon(1e-8));
  CHECK(loop.path.length == doctest::Approx(2 * R * std::sin(psi)).epsilon(1e-8));
  CHECK(loop.path.length < kTwoPi * 1.5);
}

TEST_CASE("second variation along free boundary geodesics") {
  Surface d = Surface::disk();
  auto dia = connect(d, {-1, 0}, {1, 0});
  CHECK(second_variation_normal(d, dia) == doctest::Approx(-2.0).epsilon(1e-12));
  auto chord = connect(d, {-0.6, -0.8}, {0.6, -0.8});
  CHECK_THROWS_AS(second_variation_normal(d, chord), Error);

  Surface c = cap();
  auto m = find_free_boundary_geodesic(c, 0.0, kPi / 2);
  const double phi1 = kPi / 3;
  double expect = -2.0 / std::tan(phi1) - 2 * phi1;
  CHECK(second_variation_normal(c, m) == doctest::Approx(expect).epsilon(1e-9));
  // equidistant family to the meridian on the unit sphere, truncated to the cap
  auto L = [&](double t) { return 2 * std::cos(t) * std::acos(std::cos(phi1) / std::cos(t)); };
  double h = 1e-3;
  CHECK((L(h) - 2 * L(0) + L(-h)) / (h * h) == doctest::Approx(expect).epsilon(1e-5));

  Surface rev = revolution();
  auto mr = find_free_boundary_geodesic(rev, 0.0, kPi / 2);
  double kg = rev.boundary_eval(0.0).kg;
  double capK = 2 * rev.profile().s_blend;  // K = 1 on both cap halves of the meridian
  CHECK(second_variation_normal(rev, mr) == doctest::Approx(-2 * kg - capK).epsilon(1e-9));
}

TEST_CASE("connect cost on curved surfaces") {
  Surface rev = revolution();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto t0 = std::chrono::steady_clock::now();
  int n = 0;
  while (n < 500) {
    Vec2 p{2.5 * U(rng), 2.5 * U(rng)}, q = p + Vec2{0.4 * U(rng), 0.4 * U(rng)};
    if (!rev.contains(p, 0) || !rev.contains(q, 0)) continue;
    connect_segment(rev, p, q);
    ++n;
  }
  double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count() / n;
  MESSAGE("connect_segment average microseconds: " << us);
  CHECK(us < 5000);
}
