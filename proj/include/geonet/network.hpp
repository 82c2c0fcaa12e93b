#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geonet/geodesic.hpp"

namespace geonet {

struct NetworkSegment {
  GeodesicPath path;
  int multiplicity = 1;
};

struct GeodesicNetwork {
  std::vector<NetworkSegment> segments;
  void add(GeodesicPath path, int multiplicity = 1) { segments.push_back({std::move(path), multiplicity}); }
};

// Sum of multiplicity times length.
double mass(const GeodesicNetwork& net);

constexpr double kSnapTolerance = 1e-8;

enum class JunctionClass { Regular, InteriorJunction, BoundaryJunction, BoundaryLoop, CrossingCandidate, NonAdmissible };
const char* junction_class_name(JunctionClass c);

struct JunctionEnd {
  int segment = 0;
  bool at_start = true;
  Vec2 direction;  // g-unit, pointing away from the junction
  int multiplicity = 1;
};

struct JunctionReport {
  Vec2 location;
  bool on_boundary = false;
  double boundary_s = 0.0;
  double density = 0.0;  // half the number of incident ends, counted with multiplicity
  Vec2 resultant;
  double residual = 0.0;  // interior: |resultant|_g; boundary: tangential part
  bool pass = false;
  bool crossing = false;  // created by splitting two segments at a transversal crossing
  JunctionClass classification = JunctionClass::Regular;
  std::vector<JunctionEnd> ends;
};

// Segments split at crossings and at endpoints that land on the interior of another segment.
struct SplitNetwork {
  GeodesicNetwork network;
  std::vector<int> origin;       // source segment of every piece
  std::vector<Vec2> crossings;
};

SplitNetwork register_crossings(const Surface& surface, const GeodesicNetwork& net);

std::vector<JunctionReport> check_stationarity(const Surface& surface, const GeodesicNetwork& net, double tol);

struct FaceEdge {
  int edge = 0;
  bool forward = true;
};

struct Corner {
  Vec2 point;
  double turning = 0.0;   // signed exterior angle in (-pi, pi]
  double interior = 0.0;  // pi - turning
  bool geodesic_meets_boundary = false;
  bool geodesic_corner = false;  // two network edges
};

struct Face {
  std::vector<FaceEdge> boundary_word;
  std::vector<Corner> corners;
  std::vector<double> turning_angles;
  std::vector<std::pair<double, double>> boundary_arcs;  // [s0, s1] traversed forward
  std::vector<std::vector<Vec2>> loops;                  // outer cycle first, then holes
  int euler_char = 1;
  double area = 0.0;
};

struct SubdivisionEdge {
  bool on_boundary = false;
  int segment = -1;  // piece index in the split network
  int multiplicity = 0;
  double length = 0.0;
  double s0 = 0.0, s1 = 0.0;
  int from = 0, to = 0;
  Vec2 start_dir, end_dir;  // g-unit tangents along the edge
  std::vector<Vec2> samples;
  int left_face = -1, right_face = -1;
};

struct Subdivision {
  SplitNetwork split;
  std::vector<Vec2> vertices;
  std::vector<SubdivisionEdge> edges;
  std::vector<Face> faces;
};

Subdivision build_subdivision(const Surface& surface, const GeodesicNetwork& net);
std::vector<Face> extract_faces(const Surface& surface, const GeodesicNetwork& net);

struct StarCheck {
  bool ok = true;
  std::vector<std::string> violations;
};
StarCheck check_star_property(const Face& face);

struct GaussBonnetTerms {
  double curvature = 0.0;
  double boundary_kg = 0.0;
  double turning = 0.0;
  int euler_char = 1;
  double residual = 0.0;
};
GaussBonnetTerms gauss_bonnet_terms(const Surface& surface, const Face& face);
double gauss_bonnet_audit(const Surface& surface, const Face& face);

// Integral of k_g along the boundary from s0 to s1 (s1 >= s0, may exceed the period).
double boundary_kg_integral(const Surface& surface, double s0, double s1);

struct ParityDecomposition {
  std::vector<int> I, J;      // face indices
  std::vector<int> gamma;     // subdivision edges of odd multiplicity
  std::vector<int> color;     // per face, 0 for I and 1 for J
};

ParityDecomposition parity_decomposition(const Subdivision& sub);
ParityDecomposition parity_decomposition(const Surface& surface, const GeodesicNetwork& net);
// Mod 2, the boundaries of the I faces and of the J faces both reduce to gamma.
bool parity_identity_holds(const Subdivision& sub, const ParityDecomposition& dec);

struct HypothesisReport {
  bool integer_density = true;   // interior junction densities
  bool angles_below_pi = true;   // inner face angles
  bool boundary_angles = true;   // geodesic/boundary corners at most pi/2
  int components = 0;
  bool touches_boundary = false;
  std::vector<std::string> violations;
  bool all() const { return integer_density && angles_below_pi && boundary_angles; }
};
HypothesisReport check_hypotheses(const Surface& surface, const GeodesicNetwork& net);

}  // namespace geonet
