#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geonet/core.hpp"

namespace geonet {

enum class SurfaceKind { FlatConvexDomain, SurfaceOfRevolution, SphericalCap };

const char* kind_name(SurfaceKind kind);

// A boundary piece of a flat convex domain, traversed counterclockwise.
struct BoundaryPiece {
  enum class Type { Line, Arc };
  Type type = Type::Line;
  Vec2 a, b;            // line endpoints
  Vec2 center;          // arc data
  double radius = 0.0;
  double angle0 = 0.0;
  double sweep = 0.0;   // > 0
  double s0 = 0.0;      // arc-length offset of the start
  double length = 0.0;

  Vec2 point(double local) const;
  Vec2 tangent(double local) const;
  double curvature() const { return type == Type::Arc ? 1.0 / radius : 0.0; }
  // Closest point on the piece; local parameter written to `local`.
  Vec2 closest(Vec2 p, double& local) const;
};

struct ChordHit {
  double t = 0.0;
  double s = 0.0;
};

struct FlatDomain {
  std::string shape;
  std::vector<BoundaryPiece> pieces;
  double perimeter = 0.0;
  double rounding = 0.0;

  static FlatDomain disk(Vec2 center, double radius);
  // Convex polygon with corners rounded by circular arcs of radius rho, kept inside the polygon.
  static FlatDomain rounded_polygon(std::vector<Vec2> vertices, double rho);
  // Sector with apex at the origin between directions 0 and angle.
  static FlatDomain rounded_sector(double radius, double angle, double rho);

  int piece_at(double s) const;
  // Intersections of the line o + t d (d unit) with the boundary, sorted by t.
  std::vector<ChordHit> line_hits(Vec2 o, Vec2 d) const;
  bool contains(Vec2 p, double tol) const;
  // Unsigned distance to the boundary, the foot and its parameter (ties -> smallest s).
  double closest(Vec2 p, double& s, Vec2& foot) const;
  double area() const;
  Vec2 centroid() const;
};

// Rotationally symmetric profile in arc length s from the apex.
// Either a round sphere, or a round cap of radius rho blended C1 into the line r = a u + b.
struct RotationalProfile {
  bool sphere = false;
  double rho = 1.0;         // radius of the spherical part
  double slope = 0.0;       // a
  double intercept = 0.0;   // b
  double s_blend = 0.0;     // end of the spherical part (infinity for a sphere)
  double u_blend = 0.0;
  double r_blend = 0.0;
  double tail_rate = 0.0;   // dr/ds on the line
  double s_boundary = 0.0;

  double r(double s) const;
  double dr(double s) const;
  double ddr(double s) const;
  double curvature(double s) const;

  // Native meridian coordinate: u (height) for revolution, colatitude for a sphere.
  double native_of_s(double s) const;
  double s_of_native(double n) const;
  double r_native(double n) const;
  double dr_native(double n) const;
  double ddr_native(double n) const;
  double e_native(double n) const;    // g_nn
  double de_native(double n) const;   // d g_nn / dn

  double boundary_radius() const { return r(s_boundary); }
  double meridian_length() const { return s_boundary; }
  double area() const;

  // Coefficients of the azimuthal chart metric g = f I + h x x^T and f'/s, h'/s.
  void chart_coefficients(double s, double& f, double& fs, double& h, double& hs) const;
};

struct BoundaryFrame {
  double s = 0.0;
  Vec2 point;
  Vec2 tangent;   // g-unit
  Vec2 normal;    // inward, g-unit
  double kg = 0.0;
};

struct BoundaryProjection {
  double s = 0.0;
  double distance = 0.0;
  Vec2 foot;
};

class Surface {
 public:
  static Surface flat(FlatDomain domain);
  static Surface disk(double radius = 1.0, Vec2 center = {0.0, 0.0});
  static Surface rounded_polygon(std::vector<Vec2> vertices, double rho);
  static Surface rounded_sector(double radius, double angle, double rho);
  // Unit-area style equilateral triangle of the given area, base on the x axis.
  static Surface equilateral_triangle(double area, double rho);
  static Surface revolution(double cap_radius, double slope, double cut_height);
  static Surface revolution_with_boundary_radius(double cap_radius, double slope, double boundary_radius);
  static Surface spherical_cap(double radius, double colatitude);

  SurfaceKind kind() const { return kind_; }
  bool is_flat() const { return kind_ == SurfaceKind::FlatConvexDomain; }
  const FlatDomain& flat_domain() const;
  const RotationalProfile& profile() const;

  double boundary_length() const { return boundary_length_; }
  double diameter() const { return diameter_; }
  double area() const;
  double max_curvature() const;
  double min_boundary_curvature() const;
  Vec2 center() const { return center_; }

  bool contains(Vec2 p, double tol = 1e-9) const;
  // Positive inside, zero on the boundary. Exact distance for rotational charts.
  double boundary_function(Vec2 p) const;

  // Unchecked evaluation, valid slightly outside the domain.
  Sym2 metric(Vec2 p) const;
  Christoffel christoffel(Vec2 p) const;
  double curvature(Vec2 p) const;

  Sym2 metric_at(Vec2 p) const;
  Christoffel christoffel_at(Vec2 p) const;
  double gauss_curvature_at(Vec2 p) const;

  BoundaryFrame boundary_eval(double s) const;
  BoundaryProjection project_to_boundary(Vec2 p) const;

  // Meridian coordinates (native, theta) for rotational surfaces.
  Vec2 from_polar(double native, double theta) const;
  Vec2 to_polar(Vec2 p) const;
  Sym2 polar_metric(double native) const;
  Christoffel polar_christoffel(double native) const;

  double speed(Vec2 p, Vec2 w) const { return metric(p).norm(w); }
  Vec2 normalize(Vec2 p, Vec2 w) const { return w / speed(p, w); }

  // JSON text of the construction descriptor.
  const std::string& descriptor() const { return descriptor_; }
  static Surface from_descriptor(const std::string& json_text);

 private:
  SurfaceKind kind_ = SurfaceKind::FlatConvexDomain;
  std::shared_ptr<const FlatDomain> flat_;
  std::shared_ptr<const RotationalProfile> profile_;
  double boundary_length_ = 0.0;
  double diameter_ = 0.0;
  Vec2 center_;
  std::string descriptor_;

  void finish();
  void require_inside(Vec2 p) const;
};

}  // namespace geonet
