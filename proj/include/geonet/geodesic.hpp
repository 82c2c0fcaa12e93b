#pragma once

#include <functional>
#include <vector>

#include "geonet/surface.hpp"

namespace geonet {

struct GeodesicState {
  Vec2 x;
  Vec2 v;
};

// Integrate the geodesic equation for parameter time t (exact straight lines on flat domains).
GeodesicState geodesic_flow(const Surface& surface, GeodesicState s, double t);

struct GeodesicPath {
  Vec2 start;
  Vec2 initial_velocity;          // g-unit
  double length = 0.0;
  std::vector<Vec2> samples;      // uniform arc-length spacing, first = start, last = end
  std::vector<Vec2> velocities;   // g-unit velocity at each sample

  Vec2 end() const { return samples.back(); }
  Vec2 end_velocity() const { return velocities.back(); }
  double spacing() const { return samples.size() > 1 ? length / double(samples.size() - 1) : 0.0; }
  GeodesicPath reversed() const;
};

enum class ExitKind { ReachedLength, HitBoundary };

struct ShootResult {
  GeodesicPath path;
  ExitKind exit = ExitKind::ReachedLength;
  double s_exit = 0.0;
  double exit_angle = 0.0;  // angle between arrival velocity and the boundary tangent, in [0, pi]
};

// A geodesic segment without samples; the working unit of the shortening process.
struct Segment {
  Vec2 a, b;
  Vec2 velocity;       // g-unit at a
  Vec2 end_velocity;   // g-unit at b
  double length = 0.0;
  bool radial = false; // straight in the chart (flat domains and meridians)
};

struct SampleOptions {
  double spacing = 1e-2;
};

GeodesicPath sample_geodesic(const Surface& surface, Vec2 p, Vec2 unit_v, double length, const SampleOptions& opt = {});
GeodesicPath sample_segment(const Surface& surface, const Segment& seg, const SampleOptions& opt = {});

// Point at arc length t along a segment.
Vec2 segment_point(const Surface& surface, const Segment& seg, double t);
GeodesicState segment_state(const Surface& surface, const Segment& seg, double t);

Segment connect_segment(const Surface& surface, Vec2 p, Vec2 q);
Segment drop_segment(const Surface& surface, Vec2 p);

ShootResult shoot(const Surface& surface, Vec2 p, Vec2 w, double max_length, const SampleOptions& opt = {});
GeodesicPath connect(const Surface& surface, Vec2 p, Vec2 q, const SampleOptions& opt = {});
GeodesicPath drop_to_boundary(const Surface& surface, Vec2 p, const SampleOptions& opt = {});

// Angle in [0, pi] between a vector at a boundary point and the boundary tangent.
double angle_with_boundary(const Surface& surface, double s, Vec2 v);
// Unit launch vector at beta(s) making angle psi with the tangent (psi in (0, pi) points inward).
Vec2 launch_vector(const Surface& surface, double s, double psi);

GeodesicPath find_free_boundary_geodesic(const Surface& surface, double s_start, double angle,
                                         const SampleOptions& opt = {});

struct BoundaryLoop {
  double vertex_s = 0.0;
  GeodesicPath path;
  double angle_start = 0.0;  // angle of the outgoing velocity with the forward tangent
  double angle_end = 0.0;    // angle of the reversed arrival velocity with the backward tangent
  double closure_gap = 0.0;
  double tangential_residual = 0.0;  // <v1 + v2, T>
  double launch_angle = 0.0;
};

BoundaryLoop find_boundary_geodesic_loop(const Surface& surface, double seed_s, const SampleOptions& opt = {});

// -k_g(start) - k_g(end) - integral of K along a free boundary geodesic.
double second_variation_normal(const Surface& surface, const GeodesicPath& path);

}  // namespace geonet
