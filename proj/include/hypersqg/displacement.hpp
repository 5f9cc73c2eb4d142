#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hypersqg/errors.hpp"

namespace hsqg {

/// Uniform truncation of the z1 half-line.
struct Z1Grid {
  double z1_min = -30.0;
  double z1_max = 2.2;
  std::size_t count = 1024;

  Z1Grid() = default;
  Z1Grid(double lo, double hi, std::size_t n) : z1_min(lo), z1_max(hi), count(n) {
    if (!(hi > lo) || n < 4) {
      throw DomainError("Z1Grid requires z1_min < z1_max and at least 4 nodes");
    }
  }

  [[nodiscard]] double spacing() const {
    return (z1_max - z1_min) / static_cast<double>(count - 1);
  }
  [[nodiscard]] double node(std::size_t i) const {
    return i + 1 == count ? z1_max : z1_min + static_cast<double>(i) * spacing();
  }

  /// Four-point Lagrange stencil around z: first index and weights.
  struct Stencil {
    std::size_t first;
    std::array<double, 4> w;
  };

  [[nodiscard]] Stencil stencil(double z) const {
    const double u = (z - z1_min) / spacing();
    const auto last = static_cast<std::ptrdiff_t>(count) - 4;
    const auto i0 = std::clamp(static_cast<std::ptrdiff_t>(std::floor(u)) - 1,
                               std::ptrdiff_t{0}, last);
    const double t = u - static_cast<double>(i0);
    return {static_cast<std::size_t>(i0),
            {-(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0, t * (t - 2.0) * (t - 3.0) / 2.0,
             -t * (t - 1.0) * (t - 3.0) / 2.0, t * (t - 1.0) * (t - 2.0) / 6.0}};
  }

  friend bool operator==(const Z1Grid&, const Z1Grid&) = default;
};

/// Reduced state: the z2-shift X~(z1, t) accumulated on each z1-line.
/// The solution is w~(z1, z2, t) = w~0(z1, z2 + X~(z1, t)).
struct DisplacementProfile {
  Z1Grid grid;
  std::vector<double> values;
  double t = 0.0;

  DisplacementProfile() = default;
  explicit DisplacementProfile(const Z1Grid& g, double time = 0.0)
      : grid(g), values(g.count, 0.0), t(time) {}
  DisplacementProfile(const Z1Grid& g, std::vector<double> v, double time)
      : grid(g), values(std::move(v)), t(time) {
    if (values.size() != grid.count) {
      throw DomainError("DisplacementProfile: value count does not match grid");
    }
  }

  /// Cubic interpolation; constant extension outside the grid.
  [[nodiscard]] double at(double z1) const {
    if (z1 <= grid.z1_min) return values.front();
    if (z1 >= grid.z1_max) return values.back();
    const auto st = grid.stencil(z1);
    double x = 0.0;
    for (std::size_t j = 0; j < 4; ++j) x += st.w[j] * values[st.first + j];
    return x;
  }

  /// Central difference of X~ at node i (one-sided at the ends).
  [[nodiscard]] double slope_at(std::size_t i) const {
    const double h = grid.spacing();
    if (i == 0) return (values[1] - values[0]) / h;
    if (i + 1 == values.size()) return (values[i] - values[i - 1]) / h;
    return (values[i + 1] - values[i - 1]) / (2.0 * h);
  }

  [[nodiscard]] double max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  }
};

}  // namespace hsqg
