#pragma once

#include <string>
#include <vector>

#include "geonet/birkhoff.hpp"
#include "geonet/curve.hpp"
#include "geonet/network.hpp"

namespace geonet {

// Finite collection of curves. Single-sample curves are points.
struct Cycle {
  std::vector<Curve> curves;
  double mass() const;
};

// Mass of the curves not lying in the boundary (a boundary circle is the zero relative cycle).
double relative_mass(const Surface& surface, const Cycle& cycle);

struct SweepFrame {
  double t = 0.0;
  Cycle cycle;
};

struct Sweepout {
  std::string construction;
  std::vector<SweepFrame> frames;
};

struct WidthReport {
  double max_mass = 0.0;
  double concentration = 0.0;
  int argmax = -1;  // frame index of max_mass
};

// Concentration uses a 64x64 grid of centers plus the sample points of each frame,
// so it can only underestimate the supremum over all balls.
WidthReport width_report(const Surface& surface, const Sweepout& phi, double r);

// Length of the part of the curve inside the ball of radius r at p, skipping boundary pieces.
double length_in_ball(const Surface& surface, const Curve& curve, Vec2 p, double r);

// Flat domains: lines parallel to `direction`, swept along its normal between the two support lines.
// An extra frame is inserted at the longest chord.
Sweepout parallel_sweepout(const Surface& surface, Vec2 direction, int n_frames = 256);

// Longest chord among lines making angle `angle` with the x axis.
double max_chord(const Surface& surface, double angle);

struct DirectionSearch {
  double angle = 0.0;      // in [0, pi)
  double max_chord = 0.0;
};
// Coarse scan plus golden-section refinement of the direction minimizing the longest chord.
DirectionSearch min_max_chord_direction(const Surface& surface, int coarse = 180);

// Intercept of the least-squares line through (h_i, v_i).
double extrapolate_linear(const std::vector<double>& h, const std::vector<double>& v);

// Latitude circles from the boundary down to the apex.
Sweepout rotational_sweepout(const Surface& surface, int n_frames = 256, int circle_samples = 128);

struct FacesBound {
  double bound = 0.0;
  double odd = 0.0;      // sum of lengths of odd-multiplicity edges
  double even_I = 0.0;   // even edges between two I faces
  double even_J = 0.0;
};
FacesBound faces_sweepout_bound(const Surface& surface, const GeodesicNetwork& net, const Subdivision& sub,
                                const ParityDecomposition& dec);
FacesBound faces_sweepout_bound(const Surface& surface, const GeodesicNetwork& net);

struct InscribedPolygon {
  Sweepout sweepout;
  BrokenGeodesic polygon;
  double bound = 0.0;
  double boundary_length = 0.0;
  double gap() const { return boundary_length - bound; }
};

// n boundary points at equal parameter spacing joined into a closed broken geodesic. The lunes
// between its sides and the boundary are swept by shortening homotopies (run backwards), the
// inner face by the closed process.
InscribedPolygon inscribed_polygon_sweepout(const Surface& surface, int n, int n_frames = 512);

double ls_lower_bound(const std::vector<double>& widths);

}  // namespace geonet
