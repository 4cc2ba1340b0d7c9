#pragma once

// Test-only oracles, independent of the library's evaluation paths:
// five-point finite differences for derivative cross-checks and the
// generic warped-product curvature formulas assembled from raw warps.

#include <array>
#include <cmath>
#include <functional>

#include "stharm/geometry.hpp"

namespace oracle {

inline double d1_five_point(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double d2_five_point(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

/// Ricci diagonal of dt^2 + phi^2 dx^2 + psi^2 dy^2 from raw warp data.
inline std::array<double, 3> doubly_warped_ricci(const stharm::WarpData& f,
                                                 const stharm::WarpData& g) {
  const double cross = (f.dw / f.w) * (g.dw / g.w);
  return {-f.ddw / f.w - g.ddw / g.w, -f.ddw / f.w - cross, -g.ddw / g.w - cross};
}

/// Ricci (radial, fiber) of dt^2 + w^2 g_Sigma with an Einstein (n-1)-fiber.
inline std::array<double, 2> single_warped_ricci(const stharm::WarpData& w, double kappa, int n) {
  return {-(n - 1) * w.ddw / w.w,
          kappa / (w.w * w.w) - w.ddw / w.w - (n - 2) * (w.dw / w.w) * (w.dw / w.w)};
}

/// Composite Simpson integral, independent of the library quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
