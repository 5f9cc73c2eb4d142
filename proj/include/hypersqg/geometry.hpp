#pragma once

// Quarter-plane x-coordinates and the log-hyperbolic z-coordinates
//   z1 = log(x1 x2),  z2 = log(x1 / x2).
// Hyperbolas x1 x2 = a are the vertical lines z1 = log a.

#include <cmath>
#include <limits>
#include <utility>

#include "hypersqg/errors.hpp"

namespace hsqg {

struct PointX {
  double x1 = 0.0;
  double x2 = 0.0;
  friend bool operator==(const PointX&, const PointX&) = default;
};

struct PointZ {
  double z1 = 0.0;
  double z2 = 0.0;
  friend bool operator==(const PointZ&, const PointZ&) = default;
};

/// Support box [n, N] x [0, M] of the initial scalar.
struct SupportBox {
  double n = 1.0;
  double N = 3.0;
  double M = 1.0;

  SupportBox() = default;
  SupportBox(double n_, double N_, double M_) : n(n_), N(N_), M(M_) {
    if (!(n_ > 0.0) || !(N_ >= n_) || !(M_ > 0.0)) {
      throw DomainError("SupportBox requires 0 < n <= N and M > 0");
    }
  }

  /// Largest z1 = log(x1 x2) reached by the box.
  [[nodiscard]] double z1_top() const { return std::log(N * M); }
};

/// Diagonal band holding the z-image of a support box (minus the x1-axis).
///
/// With z2 = log(x1/x2) the image satisfies z1 + lo <= -z2 <= z1 + hi, i.e.
/// the band is expressed in the ratio variable log(x2/x1) = -z2.
struct ZStrip {
  double z1_max = 0.0;
  double lo = 0.0;  // -2 log N
  double hi = 0.0;  // -2 log n

  [[nodiscard]] bool contains(const PointZ& q) const {
    const double r = -q.z2;
    return q.z1 <= z1_max && q.z1 + lo <= r && r <= q.z1 + hi;
  }
};

inline PointZ x_to_z(const PointX& p) {
  if (!(p.x1 > 0.0) || !(p.x2 > 0.0)) {
    throw DomainError("x_to_z: both coordinates must be positive");
  }
  return {std::log(p.x1 * p.x2), std::log(p.x1 / p.x2)};
}

inline PointX z_to_x(const PointZ& q) {
  // exp overflows past ~709.78; report instead of returning inf.
  constexpr double kMaxExp = 709.0;
  const double e1 = 0.5 * (q.z1 + q.z2);
  const double e2 = 0.5 * (q.z1 - q.z2);
  if (std::abs(e1) > kMaxExp || std::abs(e2) > kMaxExp) {
    throw DomainError("z_to_x: exponent outside representable range");
  }
  return {std::exp(e1), std::exp(e2)};
}

inline ZStrip support_strip(const SupportBox& box) {
  return {box.z1_top(), -2.0 * std::log(box.N), -2.0 * std::log(box.n)};
}

/// Jacobian of (z1, z2) with respect to (x1, x2): rows are grad z1, grad z2.
/// Pushes a z-gradient to x: d/dx1 = (d/dz1 + d/dz2)/x1, d/dx2 = (d/dz1 - d/dz2)/x2.
inline std::pair<double, double> z_gradient_to_x(const PointX& p, double dz1,
                                                 double dz2) {
  return {(dz1 + dz2) / p.x1, (dz1 - dz2) / p.x2};
}

}  // namespace hsqg
