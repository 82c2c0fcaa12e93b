#pragma once

#include <vector>

#include "geonet/core.hpp"

namespace geonet {

// A sampled curve in the surface chart with its exact length.
struct Curve {
  std::vector<Vec2> samples;
  bool closed = false;
  double length = 0.0;
};

}  // namespace geonet
