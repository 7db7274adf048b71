#pragma once

#include <algorithm>
#include <cmath>

// Scalar value forms of the piecewise factor curves and the navigation-
// function composition. Single definition shared by the potential module and
// the batch kernels so every evaluation path computes identical bits.

namespace navcon::detail {

/// Link-tension value b(d): 1 for d <= R - delta2, quadratic ramp on the
/// escape ring, 0 at and beyond R.
inline double tension_value(double d, double comm_radius, double delta2) {
  if (d <= comm_radius - delta2) return 1.0;
  if (d >= comm_radius) return 0.0;
  const double s = d + 2.0 * delta2 - comm_radius;
  return (2.0 * s) / delta2 - (s * s) / (delta2 * delta2);
}

/// Collision value B(d): quadratic 0 -> 1 across the collision disk of radius
/// delta1, 1 outside.
inline double collision_value(double d, double delta1) {
  if (d >= delta1) return 1.0;
  return (2.0 * d) / delta1 - (d * d) / (delta1 * delta1);
}

/// gamma / (gamma^alpha + beta_term)^(1/alpha), clamped against rounding
/// overshoot above 1.
inline double nf_value(double gamma, double beta_term, double alpha) {
  const double base = std::pow(gamma, alpha) + beta_term;
  const double val = gamma * std::pow(base, -1.0 / alpha);
  return std::min(val, 1.0);
}

}  // namespace navcon::detail
