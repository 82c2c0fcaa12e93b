#pragma once

#include <functional>

#include "geonet/core.hpp"

namespace geonet {

// Adaptive Gauss-Kronrod (7/15) on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int max_depth = 48);

}  // namespace geonet
