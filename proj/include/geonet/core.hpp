#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace geonet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // +90 degrees
inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

// Symmetric 2x2 tensor.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  double inner(Vec2 a, Vec2 b) const { return dot(a, apply(b)); }
  double norm(Vec2 a) const { return std::sqrt(inner(a, a)); }
  Sym2 inverse() const {
    double d = det();
    return {yy / d, -xy / d, xx / d};
  }
  double at(int i, int j) const { return (i == 0 && j == 0) ? xx : (i == 1 && j == 1) ? yy : xy; }
};

// Gamma^k_ij stored as g[k][i][j].
struct Christoffel {
  double g[2][2][2] = {};
  Vec2 contract(Vec2 v) const {
    double a[2] = {v.x, v.y};
    double out[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[k] += g[k][i][j] * a[i] * a[j];
    return {out[0], out[1]};
  }
};

enum class ErrorCode : int {
  Ok = 0,
  PointOutsideDomain,
  StepFailure,
  NoConvergence,
  PathLeavesDomain,
  NoLoopFound,
  NotFreeBoundary,
  SegmentTooLong,
  NotCollapsed,
  MalformedNetwork,
  NonManifoldIncidence,
  TriangulationFailure,
  ParityInconsistency,
  PreconditionUnverified,
  NotFlat,
  WrongSurfaceKind,
  NUnreachable,
  UnknownScenario,
  ConfigInvalid,
  IoFailure,
  Internal,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Reduce an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

inline double wrap_period(double s, double period) {
  double r = std::fmod(s, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace geonet
