#pragma once

#include <vector>

#include "geonet/curve.hpp"
#include "geonet/geodesic.hpp"

namespace geonet {

// A broken geodesic: break points joined by shortest geodesic segments.
// `L` fixes the lattice of 2L+1 evenly spaced points (2L when closed) the shortening map works on.
struct BrokenGeodesic {
  int L = 0;
  bool closed = false;
  bool endpoints_on_boundary = true;
  std::vector<Vec2> breaks;       // closed curves do not repeat the first break
  std::vector<Segment> segments;
  double total_length = 0.0;
  double lipschitz_bound = 0.0;

  int segment_count() const { return int(segments.size()); }
  // Constant-speed points x_0 .. x_2L (open) or x_0 .. x_{2L-1} (closed).
  std::vector<Vec2> vertices(const Surface& surface) const;
  Vec2 point_at(const Surface& surface, double t) const;
  Curve to_curve(const Surface& surface, double spacing = 1e-2) const;
};

// Joins consecutive breaks by shortest geodesics.
BrokenGeodesic make_broken_geodesic(const Surface& surface, const std::vector<Vec2>& breaks, int L, bool closed);

// Lower bound for the distance at which inward boundary normals can focus.
// Throws ConfigInvalid on polygons with sharp corners.
double boundary_focal_distance(const Surface& surface);
// Largest admissible segment length: 0.9 min(diameter, focal distance, pi / sqrt(K_max)).
double lambda_epsilon(const Surface& surface);
// Segment count for a curve of the given length: 2 ceil(length / eps), at least 8.
int default_segment_count(const Surface& surface, double length);

BrokenGeodesic project_to_lambda(const Surface& surface, const std::vector<Vec2>& polyline, int L, bool closed = false);

struct StepReport {
  double decrease = 0.0;
  bool held = false;  // new curve was not shorter up to roundoff; input returned
};

BrokenGeodesic shorten_step(const Surface& surface, const BrokenGeodesic& sigma, StepReport* report = nullptr);

struct CurveResiduals {
  double orthogonality = 0.0;  // max |angle with the boundary - pi/2| at the ends
  double breaks = 0.0;         // max turning angle at interior breaks
};
CurveResiduals curve_residuals(const Surface& surface, const BrokenGeodesic& sigma);

enum class OutcomeKind { FixedFreeBoundaryGeodesic, FixedClosedGeodesic, Collapsed, MaxIterations };
const char* outcome_name(OutcomeKind kind);

struct ShorteningOutcome {
  OutcomeKind kind = OutcomeKind::MaxIterations;
  std::vector<BrokenGeodesic> trajectory;
  std::vector<double> lengths;
  Vec2 collapse_point;
  int iterations = 0;
  int held_steps = 0;
  CurveResiduals residuals;
};

// tol <= 0 selects 1e-4 times the surface diameter.
ShorteningOutcome shorten_run(const Surface& surface, const BrokenGeodesic& sigma0, double tol = -1.0,
                              int max_iter = 50000);

// Family of n_frames curves from sigma0 down to the collapse point.
std::vector<Curve> homotopy_extract(const Surface& surface, const ShorteningOutcome& outcome, int n_frames);

}  // namespace geonet
