#pragma once

// Admissible initial data: a C^1, nonnegative, compactly supported bump
//   w0(x1, x2) = A * b(x1) * h(x2),
//   b(x1) = cos^2(pi (x1 - c1) / (2 r1))            on [c1 - r1, c1 + r1],
//   h(x2) = 1 on [0, M/2], cos^2(pi (x2 - M/2) / M)  on (M/2, M]   (plateau),
//   h(x2) = cos^2(pi (x2 - M/2) / M)                 on [0, M]      (lifted).
// The lifted profile vanishes on the x1-axis and exists only as the
// degenerate counterexample for the axis-trace constant.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hypersqg/errors.hpp"
#include "hypersqg/geometry.hpp"
#include "hypersqg/quadrature.hpp"

namespace hsqg {

enum class Profile { plateau, lifted };

inline const char* to_string(Profile p) {
  return p == Profile::plateau ? "plateau" : "lifted";
}

inline Profile profile_from_string(const std::string& s) {
  if (s == "plateau") return Profile::plateau;
  if (s == "lifted") return Profile::lifted;
  throw DomainError("unknown bump profile '" + s + "' (expected plateau or lifted)");
}

struct BumpSpec {
  double amplitude = 1.0;
  double center = 2.0;
  double radius = 1.0;
  double height = 1.0;
  Profile profile = Profile::plateau;

  BumpSpec() = default;
  BumpSpec(double A, double c1, double r1, double M, Profile prof = Profile::plateau)
      : amplitude(A), center(c1), radius(r1), height(M), profile(prof) {
    validate();
  }

  void validate() const {
    if (!(amplitude >= 0.0)) throw DomainError("bump amplitude must be >= 0");
    if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
    if (!(center - radius > 0.0)) {
      throw DomainError("bump support must stay away from x1 = 0 (center - radius > 0)");
    }
    if (!(height > 0.0)) throw DomainError("bump height must be positive");
  }

  [[nodiscard]] bool is_zero() const { return amplitude == 0.0; }
  [[nodiscard]] SupportBox box() const {
    return {center - radius, center + radius, height};
  }

  /// Interior x2-values where h is only C^1.
  [[nodiscard]] std::vector<double> x2_breaks() const {
    if (profile == Profile::plateau) return {0.5 * height};
    return {};
  }

  friend bool operator==(const BumpSpec&, const BumpSpec&) = default;
};

namespace detail {

struct Factor {
  double value;
  double slope;
};

inline Factor x1_factor(const BumpSpec& s, double x1) {
  const double u = x1 - s.center;
  if (std::abs(u) > s.radius) return {0.0, 0.0};
  const double k = std::numbers::pi / (2.0 * s.radius);
  const double c = std::cos(k * u);
  return {c * c, -k * std::sin(2.0 * k * u)};
}

inline Factor x2_factor(const BumpSpec& s, double x2) {
  const double M = s.height;
  if (x2 < 0.0 || x2 > M) return {0.0, 0.0};
  if (s.profile == Profile::plateau && x2 <= 0.5 * M) return {1.0, 0.0};
  // cos^2(pi (x2 - M/2) / M) written as sin^2 so the x2 = 0 edge is exactly 0
  const double k = std::numbers::pi / M;
  const double sn = std::sin(k * x2);
  return {sn * sn, k * std::sin(2.0 * k * x2)};
}

}  // namespace detail

inline double eval_omega0_x(const BumpSpec& s, const PointX& p) {
  if (s.is_zero()) return 0.0;
  const auto b = detail::x1_factor(s, p.x1);
  if (b.value == 0.0) return 0.0;
  return s.amplitude * b.value * detail::x2_factor(s, p.x2).value;
}

/// Analytic gradient in x. Zero outside the support box.
inline std::pair<double, double> grad_omega0_x(const BumpSpec& s, const PointX& p) {
  if (s.is_zero()) return {0.0, 0.0};
  const auto b = detail::x1_factor(s, p.x1);
  const auto h = detail::x2_factor(s, p.x2);
  return {s.amplitude * b.slope * h.value, s.amplitude * b.value * h.slope};
}

namespace detail {

// log(x1) and log(x2) of a z-point, without forming exp of huge arguments.
inline bool z_in_box(const BumpSpec& s, const PointZ& q) {
  const double l1 = 0.5 * (q.z1 + q.z2);
  const double l2 = 0.5 * (q.z1 - q.z2);
  const auto box = s.box();
  return l1 >= std::log(box.n) - 1e-15 && l1 <= std::log(box.N) + 1e-15 &&
         l2 <= std::log(box.M) + 1e-15;
}

}  // namespace detail

inline double eval_omega0_z(const BumpSpec& s, const PointZ& q) {
  if (s.is_zero() || !detail::z_in_box(s, q)) return 0.0;
  return eval_omega0_x(s, z_to_x(q));
}

/// Partial derivatives of w0(x(z)) in (z1, z2).
inline std::pair<double, double> grad_omega0_z(const BumpSpec& s, const PointZ& q) {
  if (s.is_zero() || !detail::z_in_box(s, q)) return {0.0, 0.0};
  const PointX p = z_to_x(q);
  const auto [g1, g2] = grad_omega0_x(s, p);
  // dx1/dz1 = dx1/dz2 = x1/2, dx2/dz1 = x2/2, dx2/dz2 = -x2/2
  return {0.5 * (p.x1 * g1 + p.x2 * g2), 0.5 * (p.x1 * g1 - p.x2 * g2)};
}

/// z2-range of the support on the line z1 (empty when lo >= hi).
struct Band {
  double lo;
  double hi;
  [[nodiscard]] bool empty() const { return !(hi > lo); }
};

inline Band z2_band(const BumpSpec& s, double z1) {
  const auto box = s.box();
  return {std::max(2.0 * std::log(box.n) - z1, z1 - 2.0 * std::log(box.M)),
          2.0 * std::log(box.N) - z1};
}

/// z2-values on the line z1 where the profile is only C^1.
inline std::vector<double> z2_breaks(const BumpSpec& s, double z1) {
  std::vector<double> out;
  for (double x2b : s.x2_breaks()) out.push_back(z1 - 2.0 * std::log(x2b));
  return out;
}

/// z1-values where the band or the profile kink changes structure.
inline std::vector<double> z1_breaks(const BumpSpec& s) {
  const auto box = s.box();
  std::vector<double> out{std::log(box.n * box.M), std::log(box.N * box.M)};
  for (double x2b : s.x2_breaks()) {
    out.push_back(std::log(box.n * x2b));
    out.push_back(std::log(box.N * x2b));
  }
  return out;
}

struct CrossSection {
  double z1;
  double value;
};

/// I(z1) = integral of w~0(z1, .) over z2, via the x-side form
/// 2 * int w0(x1, e^{z1}/x1) / x1 dx1.
inline CrossSection cross_section(const BumpSpec& s, double z1,
                                  const QuadratureRule& rule) {
  if (s.is_zero()) return {z1, 0.0};
  const auto box = s.box();
  const double a = std::exp(z1);
  const double lo = std::max(box.n, a / box.M);
  if (!(box.N > lo)) return {z1, 0.0};
  std::vector<double> breaks;
  for (double x2b : s.x2_breaks()) breaks.push_back(a / x2b);
  const double v = integrate_checked(
      [&](double x1) { return eval_omega0_x(s, {x1, a / x1}) / x1; }, lo, box.N,
      rule, breaks, 1e-9, "cross_section");
  return {z1, 2.0 * v};
}

/// Same quantity integrated directly along the z2-line.
inline double cross_section_z(const BumpSpec& s, double z1, const QuadratureRule& rule) {
  if (s.is_zero()) return 0.0;
  const Band band = z2_band(s, z1);
  if (band.empty()) return 0.0;
  const auto breaks = z2_breaks(s, z1);
  return integrate_checked([&](double z2) { return eval_omega0_z(s, {z1, z2}); },
                           band.lo, band.hi, rule, breaks, 1e-9, "cross_section_z");
}

/// Threshold and constant of the axis-trace lower bound: I(z1) >= C for z1 <= Z1.
struct AxisBound {
  double Z1;
  double C;
  double limit;  // stabilized value of I(z1) as z1 -> -infinity
};

inline AxisBound estimate_Z1_C(const BumpSpec& s, const QuadratureRule& rule,
                               double step = 1.0 / 32.0) {
  constexpr double kFloor = 1e-12;
  constexpr double kDepth = 80.0;
  constexpr int kStableRun = 16;
  if (s.is_zero()) {
    throw DomainError("estimate_Z1_C: initial data vanish identically");
  }
  const double top = s.box().z1_top();
  std::vector<CrossSection> samples;
  int stable = 0;
  for (double z = top - step; z > top - kDepth; z -= step) {
    samples.push_back(cross_section(s, z, rule));
    if (samples.size() >= 2) {
      const double cur = samples.back().value;
      const double prev = samples[samples.size() - 2].value;
      stable = (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) ? stable + 1 : 0;
      if (stable >= kStableRun) break;
    }
  }
  const double limit = samples.back().value;
  if (stable < kStableRun || !(limit > kFloor)) {
    throw DomainError(
        "estimate_Z1_C: I(z1) does not stabilize above 1e-12 as z1 decreases "
        "(initial data vanish on the x1-axis?)");
  }
  // Largest sample below which every sample stays within 1% of the limit.
  std::size_t first_ok = samples.size() - 1;
  while (first_ok > 0 &&
         std::abs(samples[first_ok - 1].value - limit) <= 0.01 * limit) {
    --first_ok;
  }
  double C = limit;
  for (std::size_t i = first_ok; i < samples.size(); ++i) {
    C = std::min(C, samples[i].value);
  }
  return {samples[first_ok].z1, C, limit};
}

}  // namespace hsqg
