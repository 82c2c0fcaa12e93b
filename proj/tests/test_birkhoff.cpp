#include <random>

#include "doctest.h"
#include "geonet/birkhoff.hpp"

using namespace geonet;

namespace {

// Planar reference for the shortening map on the unit disk, written from scratch with straight segments.
double poly_length(const std::vector<Vec2>& p, bool closed = false) {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) acc += norm(p[i + 1] - p[i]);
  if (closed) acc += norm(p.front() - p.back());
  return acc;
}

std::vector<Vec2> even_points(std::vector<Vec2> p, int count, bool closed) {
  if (closed) p.push_back(p.front());
  double total = poly_length(p), step = total / count;
  std::vector<Vec2> out;
  size_t j = 0;
  double off = 0.0;
  int n = closed ? count : count + 1;
  for (int k = 0; k < n; ++k) {
    double t = step * k;
    while (j + 2 < p.size() && t > off + norm(p[j + 1] - p[j])) off += norm(p[j + 1] - p[j]), ++j;
    double len = norm(p[j + 1] - p[j]);
    out.push_back(p[j] + (p[j + 1] - p[j]) * std::min(1.0, (t - off) / len));
  }
  return out;
}

std::vector<Vec2> disk_D(const std::vector<Vec2>& pts, int L) {
  auto x = even_points(pts, 2 * L, false);
  auto foot = [](Vec2 p) { return p / norm(p); };
  std::vector<Vec2> s1 = {foot(x[2])};
  for (int i = 1; i < L; ++i) s1.push_back(x[2 * i]);
  s1.push_back(foot(x[2 * L - 2]));
  std::vector<Vec2> mids;
  for (size_t i = 0; i + 1 < s1.size(); ++i) mids.push_back((s1[i] + s1[i + 1]) * 0.5);
  std::vector<Vec2> s2 = {foot(mids.front())};
  s2.insert(s2.end(), mids.begin(), mids.end());
  s2.push_back(foot(mids.back()));
  return s2;
}

std::vector<Vec2> chord_at(double d) {
  double c = std::sqrt(1 - d * d);
  return {{-c, d}, {c, d}};
}

std::vector<Vec2> circle(double r, int n, Vec2 c = {}) {
  std::vector<Vec2> p;
  for (int k = 0; k < n; ++k) p.push_back(c + unit_from_angle(kTwoPi * k / n) * r);
  return p;
}

}  // namespace

TEST_CASE("projection onto broken geodesics") {
  Surface d = Surface::disk();
  std::vector<Vec2> diam;
  for (int k = 0; k <= 20; ++k) diam.push_back({-1 + 0.1 * k, 0});
  auto g = project_to_lambda(d, diam, 16);
  CHECK(g.segment_count() == 16);
  CHECK(g.total_length == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g.endpoints_on_boundary);

  // arc of the unit circle about (1, 0), from boundary to boundary through the center
  std::vector<Vec2> arc;
  for (int k = 0; k <= 400; ++k) arc.push_back(Vec2{1, 0} + unit_from_angle(2 * kPi / 3 + (2 * kPi / 3) * k / 400));
  auto a = project_to_lambda(d, arc, 32);
  CHECK(a.total_length == doctest::Approx(32 * 2 * std::sin(kPi / 96)).epsilon(1e-4));
  CHECK(a.total_length < 2 * kPi / 3);

  auto c = project_to_lambda(d, circle(0.5, 320), 32, true);
  CHECK(c.closed);
  CHECK(c.total_length == doctest::Approx(32 * std::sin(kPi / 32)).epsilon(1e-12));
  CHECK(c.total_length <= poly_length(circle(0.5, 320), true) + 1e-9);

  CHECK_THROWS_AS(project_to_lambda(d, diam, 1), Error);
  try {
    project_to_lambda(d, {{-1.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}}, 2);
    FAIL("expected SegmentTooLong");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SegmentTooLong);
  }
}

TEST_CASE("admissible segment length") {
  // inward normals of a circle meet at its center; on the unit sphere those of the colatitude phi circle meet at the pole
  CHECK(lambda_epsilon(Surface::disk()) == doctest::Approx(0.9));
  CHECK(lambda_epsilon(Surface::disk(2.0)) == doctest::Approx(1.8));
  CHECK(lambda_epsilon(Surface::spherical_cap(1, kPi / 3)) == doctest::Approx(0.9 * kPi / 3));
  CHECK(lambda_epsilon(Surface::spherical_cap(1, 1.5)) == doctest::Approx(0.9 * 1.5));
  // cone tail: k_g = sin(alpha) / r, model-space focal distance atan(r / sin(alpha))
  const double sin_alpha = 0.2 / std::sqrt(1.04);
  CHECK(lambda_epsilon(Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5)) ==
        doctest::Approx(0.9 * std::atan(1.5 / sin_alpha)));
  CHECK(lambda_epsilon(Surface::equilateral_triangle(1.0, 0.03)) == doctest::Approx(0.9 * 0.03));
  CHECK_THROWS_AS(lambda_epsilon(Surface::equilateral_triangle(1.0, 0.0)), Error);
  CHECK(default_segment_count(Surface::disk(), 2.0) == 8);
  CHECK(default_segment_count(Surface::disk(), 9.0) == 20);
}

TEST_CASE("one shortening step on the disk") {
  Surface d = Surface::disk();
  auto dia = project_to_lambda(d, {{-1, 0}, {1, 0}}, 8);
  StepReport rep;
  auto same = shorten_step(d, dia, &rep);
  CHECK(std::abs(same.total_length - 2.0) < 1e-10);
  CHECK(std::abs(rep.decrease) < 1e-10);

  auto chord = project_to_lambda(d, chord_at(0.5), 8);
  auto next = shorten_step(d, chord, &rep);
  double expect = poly_length(disk_D(chord_at(0.5), 8));
  CHECK(next.total_length == doctest::Approx(expect).epsilon(1e-13));
  CHECK(next.total_length < chord.total_length - 1e-3);
  CHECK(rep.decrease == doctest::Approx(chord.total_length - expect).epsilon(1e-12));

  std::vector<Vec2> vee = {{-0.8, -0.6}, {0.0, 0.2}, {0.8, -0.6}};
  auto v = project_to_lambda(d, vee, 8);
  auto vn = shorten_step(d, v);
  CHECK(vn.total_length == doctest::Approx(poly_length(disk_D({v.breaks.begin(), v.breaks.end()}, 8))).epsilon(1e-13));
  CHECK(vn.total_length < v.total_length);
  // the corner itself is cut off
  for (auto p : vn.breaks) CHECK(p.y < 0.2 - 1e-3);
}

TEST_CASE("shortening runs on the disk") {
  Surface d = Surface::disk();
  auto chord = project_to_lambda(d, chord_at(0.5), 8);
  auto o = shorten_run(d, chord);
  CHECK(o.kind == OutcomeKind::Collapsed);
  for (size_t k = 1; k < o.lengths.size(); ++k) CHECK(o.lengths[k] < o.lengths[k - 1]);
  CHECK(o.lengths.back() < 1e-4 * 2);
  CHECK(norm(o.collapse_point) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(o.collapse_point.y > 0.0);

  // diameter with its middle pushed 1e-3 along the normal: a saddle, so either outcome is acceptable
  std::vector<Vec2> bump = {{-1, 0}, {0, 1e-3}, {1, 0}};
  auto b = shorten_run(d, project_to_lambda(d, bump, 8));
  CHECK((b.kind == OutcomeKind::Collapsed || b.kind == OutcomeKind::FixedFreeBoundaryGeodesic ||
         b.kind == OutcomeKind::MaxIterations));
  for (double l : b.lengths) CHECK(l <= 2 + 1e-6);
  for (size_t k = 1; k < b.lengths.size(); ++k) CHECK(b.lengths[k] <= b.lengths[k - 1] + 1e-12);

  auto poly = project_to_lambda(d, circle(0.5, 320), 32, true);
  CHECK(poly.total_length == doctest::Approx(32 * std::sin(kPi / 32)).epsilon(1e-12));
  auto c = shorten_run(d, poly);
  CHECK(c.kind == OutcomeKind::Collapsed);
  CHECK(norm(c.collapse_point) < 1e-4);
  // a regular polygon stays regular: each step replaces it by the polygon of its edge midpoints
  for (size_t k = 1; k < c.lengths.size(); ++k)
    CHECK(c.lengths[k] / c.lengths[k - 1] == doctest::Approx(std::cos(kPi / 32)).epsilon(1e-12));
}

TEST_CASE("diameter and meridians are fixed points") {
  Surface d = Surface::disk();
  auto o = shorten_run(d, project_to_lambda(d, {{0, -1}, {0, 1}}, 8));
  CHECK(o.kind == OutcomeKind::FixedFreeBoundaryGeodesic);
  CHECK(o.iterations == 1);
  CHECK(o.residuals.orthogonality < 1e-6);

  Surface rev = Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5);
  auto m = find_free_boundary_geodesic(rev, 0.0, kPi / 2);
  auto g = project_to_lambda(rev, m.samples, default_segment_count(rev, m.length));
  StepReport rep;
  auto next = shorten_step(rev, g, &rep);
  CHECK(std::abs(next.total_length - g.total_length) < 1e-6 * g.total_length);
  CHECK(g.total_length == doctest::Approx(m.length).epsilon(1e-9));

  Surface cap = Surface::spherical_cap(1.0, kPi / 3);
  auto mc = find_free_boundary_geodesic(cap, 1.0, 1.2);
  auto gc = project_to_lambda(cap, mc.samples, 8);
  CHECK(std::abs(shorten_step(cap, gc).total_length - mc.length) < 1e-6 * mc.length);
}

TEST_CASE("homotopy extraction") {
  Surface d = Surface::disk();
  auto chord = project_to_lambda(d, chord_at(0.5), 8);
  auto o = shorten_run(d, chord);
  auto frames = homotopy_extract(d, o, 64);
  REQUIRE(frames.size() == 64);
  CHECK(frames.front().length == doctest::Approx(chord.total_length).epsilon(1e-12));
  CHECK(frames.back().length == 0.0);
  CHECK(frames.back().samples.size() == 1);
  for (const auto& f : frames) {
    CHECK(f.length <= chord.total_length + 1e-9);
    if (f.samples.size() > 1) {
      CHECK(std::abs(norm(f.samples.front()) - 1) < 1e-12);
      CHECK(std::abs(norm(f.samples.back()) - 1) < 1e-12);
    }
  }
  CHECK(frames[frames.size() - 2].length < 2e-4);

  auto point = make_broken_geodesic(d, {{0.3, 0.1}, {0.3, 0.1}}, 8, false);
  auto po = shorten_run(d, point);
  CHECK(po.kind == OutcomeKind::Collapsed);
  for (const auto& f : homotopy_extract(d, po, 8)) {
    CHECK(f.length == 0.0);
    for (auto p : f.samples) CHECK(norm(p - Vec2{0.3, 0.1}) < 1e-15);
  }

  CHECK_THROWS_AS(homotopy_extract(d, shorten_run(d, project_to_lambda(d, {{-1, 0}, {1, 0}}, 8)), 8), Error);

  // segment parallel to an edge of a sector sweeps only the strip it cuts off
  Surface sec = Surface::rounded_sector(1.0, 2 * kPi / 5, 0.05);
  const double hgt = 0.2;
  Vec2 a{hgt / std::tan(2 * kPi / 5), hgt}, b{std::sqrt(1 - hgt * hgt), hgt};
  auto s0 = project_to_lambda(sec, {a, b}, default_segment_count(sec, norm(b - a)));
  auto so = shorten_run(sec, s0);
  REQUIRE(so.kind == OutcomeKind::Collapsed);
  // the family stays on the side of the segment where it collapses
  const double side = so.collapse_point.y > hgt ? 1.0 : -1.0;
  for (const auto& f : homotopy_extract(sec, so, 64))
    for (auto p : f.samples) CHECK(side * (p.y - hgt) >= -1e-12);
}

TEST_CASE("monotone lengths on random curves") {
  std::vector<Surface> surfaces = {Surface::disk(), Surface::equilateral_triangle(1.0, 0.03),
                                   Surface::rounded_sector(1.0, 2 * kPi / 5, 0.05), Surface::spherical_cap(1.0, kPi / 3),
                                   Surface::revolution_with_boundary_radius(1.0, 0.2, 1.5)};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& s : surfaces) {
    const double T = s.boundary_length();
    for (int r = 0; r < 6; ++r) {
      Vec2 a = s.boundary_eval(T * U(rng)).point, b = s.boundary_eval(T * U(rng)).point;
      Vec2 m = s.center() + ((a + b) * 0.5 - s.center()) * U(rng);
      auto raw = make_broken_geodesic(s, {a, m, b}, 8, false);
      auto sig = project_to_lambda(s, {a, m, b}, default_segment_count(s, raw.total_length));
      CHECK(sig.total_length <= raw.total_length + 1e-9);
      auto o = shorten_run(s, sig);
      for (size_t k = 1; k < o.lengths.size(); ++k) CHECK(o.lengths[k] <= o.lengths[k - 1] + 1e-12);
      if (o.kind == OutcomeKind::Collapsed) {
        for (const auto& f : homotopy_extract(s, o, 32)) CHECK(f.length <= sig.total_length + 1e-9);
      } else if (o.kind == OutcomeKind::FixedFreeBoundaryGeodesic) {
        CHECK(o.residuals.orthogonality < 1e-6);
      }
    }
  }
}

TEST_CASE("shortening map depends continuously on the curve") {
  Surface s = Surface::spherical_cap(1.0, kPi / 3);
  auto base = project_to_lambda(s, {s.boundary_eval(0.2).point, {0.1, 0.2}, s.boundary_eval(2.5).point}, 8);
  auto d0 = shorten_step(s, base);
  double worst = 0.0;
  for (double h : {1e-3, 1e-4, 1e-5}) {
    auto moved = base.breaks;
    for (size_t i = 1; i + 1 < moved.size(); ++i) moved[i] = moved[i] + Vec2{h, -h} * (i % 2 ? 1.0 : -0.5);
    auto d1 = shorten_step(s, make_broken_geodesic(s, moved, 8, false));
    REQUIRE(d1.breaks.size() == d0.breaks.size());
    double dist = 0.0;
    for (size_t i = 0; i < d0.breaks.size(); ++i) dist = std::max(dist, norm(d1.breaks[i] - d0.breaks[i]));
    worst = std::max(worst, dist / h);
  }
  MESSAGE("empirical Lipschitz constant of one step: " << worst);
  CHECK(worst < 10.0);
}
