#include "geonet/quadrature.hpp"

#include <cmath>

namespace geonet {

namespace {

constexpr double kXk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& kr, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  kr = fc * kWk[7];
  double g = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    double x = h * kXk[i];
    double s = f(c - x) + f(c + x);
    kr += kWk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  kr *= h;
  g *= h;
  err = std::abs(kr - g);
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  double kr, err;
  gk15(f, a, b, kr, err);
  if (err <= tol || depth <= 0 || std::abs(b - a) < 1e-15 * (1.0 + std::abs(a))) return kr;
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, abs_tol, max_depth);
}

}  // namespace geonet
