#pragma once

// Quadrature of the hyperbolic Biot-Savart law
//   Omega(x) = int_{y1 y2 >= x1 x2} w(y) / |y|^{2+alpha} dy,
//   u(x) = (-x1 Omega, x2 Omega),
// in x-coordinates, and of its z-coordinate form Omega~(z1).

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <vector>

#include "hypersqg/displacement.hpp"
#include "hypersqg/errors.hpp"
#include "hypersqg/geometry.hpp"
#include "hypersqg/initial_data.hpp"
#include "hypersqg/quadrature.hpp"

namespace hsqg {

class Alpha {
 public:
  explicit Alpha(double a) : value_(a) {
    if (!(a > 0.0 && a < 1.0)) {
      throw DomainError("alpha must lie in the open interval (0, 1)");
    }
  }
  [[nodiscard]] double value() const { return value_; }
  /// Exponent 1 + alpha/2 of the cosh kernel and of |y|^2.
  [[nodiscard]] double kernel_power() const { return 1.0 + 0.5 * value_; }
  /// Prefactor of Omega~: the Jacobian e^{y1}/2 against (2 e^{y1} cosh y2)^{1+alpha/2}.
  [[nodiscard]] double z_prefactor() const { return std::pow(2.0, -2.0 - 0.5 * value_); }

 private:
  double value_;
};

/// A scalar on the quarter-plane with a known compact support box and the
/// axis-aligned lines where it is only C^1.
template <typename F>
concept ScalarField = requires(const F& f, PointX p) {
  { f(p) } -> std::convertible_to<double>;
  { f.box() } -> std::convertible_to<SupportBox>;
  { f.x1_breaks() } -> std::convertible_to<std::vector<double>>;
  { f.x2_breaks() } -> std::convertible_to<std::vector<double>>;
  { f.is_zero() } -> std::convertible_to<bool>;
};

/// w0 itself.
struct InitialField {
  BumpSpec spec;
  double operator()(const PointX& p) const { return eval_omega0_x(spec, p); }
  [[nodiscard]] SupportBox box() const { return spec.box(); }
  [[nodiscard]] std::vector<double> x1_breaks() const { return {}; }
  [[nodiscard]] std::vector<double> x2_breaks() const { return spec.x2_breaks(); }
  [[nodiscard]] bool is_zero() const { return spec.is_zero(); }
};

/// w(x, t) = w~0(z1, z2 + X~(z1)) reconstructed on the x-side from a profile.
struct TransportedField {
  BumpSpec spec;
  DisplacementProfile disp;

  double operator()(const PointX& p) const {
    if (spec.is_zero() || !(p.x1 > 0.0)) return 0.0;
    if (p.x2 <= 0.0) {
      if (p.x2 < 0.0) return 0.0;
      // axis: the line z1 -> -inf carries the shift of the lowest node
      const double x1 = p.x1 * std::exp(0.5 * disp.values.front());
      return eval_omega0_x(spec, {x1, 0.0});
    }
    const PointZ q = x_to_z(p);
    return eval_omega0_z(spec, {q.z1, q.z2 + disp.at(q.z1)});
  }
  [[nodiscard]] SupportBox box() const {
    const auto b = spec.box();
    const double s = std::exp(0.5 * disp.max_value());
    return {b.n / s, b.N, b.M * s};
  }
  [[nodiscard]] std::vector<double> x1_breaks() const {
    // support edges x1 = n e^{-X/2}, N e^{-X/2}; exact when X~ is constant
    const auto b = spec.box();
    std::vector<double> out;
    for (double x : {disp.values.front(), disp.values.back()}) {
      out.push_back(b.n * std::exp(-0.5 * x));
      out.push_back(b.N * std::exp(-0.5 * x));
    }
    return out;
  }
  [[nodiscard]] std::vector<double> x2_breaks() const {
    // exact when X~ is constant; the profile kink curve otherwise
    std::vector<double> out;
    const double lo = *std::min_element(disp.values.begin(), disp.values.end());
    const double hi = disp.max_value();
    for (double x2b : spec.x2_breaks()) {
      out.push_back(x2b * std::exp(0.5 * lo));
      if (hi != lo) out.push_back(x2b * std::exp(0.5 * hi));
    }
    return out;
  }
  [[nodiscard]] bool is_zero() const { return spec.is_zero(); }
};

struct VelocityX {
  double u1;
  double u2;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

namespace detail {

inline double x_kernel(double y1, double y2, double p) {
  return std::pow(y1 * y1 + y2 * y2, -p);
}

}  // namespace detail

/// Omega at any x with x1 x2 = a.
template <ScalarField Field>
double omega_x(double a, const Field& field, const Alpha& alpha,
               const QuadratureRule& rule) {
  if (!(a >= 0.0)) throw DomainError("omega_x: a = x1 x2 must be nonnegative");
  if (field.is_zero()) return 0.0;
  const SupportBox box = field.box();
  const double lo = a > 0.0 ? std::max(box.n, a / box.M) : box.n;
  if (!(box.N > lo)) return 0.0;
  const double p = alpha.kernel_power();
  const auto x2b = field.x2_breaks();
  std::vector<double> outer_breaks = field.x1_breaks();
  if (a > 0.0) {
    for (double b : x2b) outer_breaks.push_back(a / b);
  }
  auto inner = [&](double y1) {
    const double y2lo = a / y1;
    if (!(box.M > y2lo)) return 0.0;
    return integrate_checked(
        [&](double y2) { return field({y1, y2}) * detail::x_kernel(y1, y2, p); }, y2lo,
        box.M, rule, x2b, 1e-9, "omega_x inner");
  };
  return integrate_checked(inner, lo, box.N, rule, outer_breaks, 1e-9, "omega_x");
}

/// dOmega/da: the Leibniz boundary term along the hyperbola y1 y2 = a,
///   -int w(y1, a/y1) / (y1 |y|^{2+alpha}) dy1   (<= 0 for w >= 0).
template <ScalarField Field>
double omega_a(double a, const Field& field, const Alpha& alpha,
               const QuadratureRule& rule) {
  if (!(a > 0.0)) throw DomainError("omega_a: a must be positive");
  if (field.is_zero()) return 0.0;
  const SupportBox box = field.box();
  const double lo = std::max(box.n, a / box.M);
  if (!(box.N > lo)) return 0.0;
  const double p = alpha.kernel_power();
  std::vector<double> breaks = field.x1_breaks();
  for (double b : field.x2_breaks()) breaks.push_back(a / b);
  const double v = integrate_checked(
      [&](double y1) {
        const double y2 = a / y1;
        return field({y1, y2}) * detail::x_kernel(y1, y2, p) / y1;
      },
      lo, box.N, rule, breaks, 1e-9, "omega_a");
  return -v;
}

template <ScalarField Field>
VelocityX velocity(const PointX& x, const Field& field, const Alpha& alpha,
                   const QuadratureRule& rule) {
  if (!(x.x1 >= 0.0 && x.x2 >= 0.0)) {
    throw DomainError("velocity: point outside the quarter-plane");
  }
  const double om = omega_x(x.x1 * x.x2, field, alpha, rule);
  return {-x.x1 * om, x.x2 * om};
}

/// Jacobian J[i][j] = du_i/dx_j built from Omega and Omega_a via
/// Omega_{x1} = x2 Omega_a, Omega_{x2} = x1 Omega_a.
template <ScalarField Field>
Matrix2 grad_u(const PointX& x, const Field& field, const Alpha& alpha,
               const QuadratureRule& rule) {
  if (!(x.x1 > 0.0 && x.x2 > 0.0)) throw DomainError("grad_u: x1, x2 must be positive");
  const double a = x.x1 * x.x2;
  const double om = omega_x(a, field, alpha, rule);
  const double oa = omega_a(a, field, alpha, rule);
  const double om1 = x.x2 * oa;
  const double om2 = x.x1 * oa;
  return {{{-om - x.x1 * om1, -x.x1 * om2}, {x.x2 * om1, om + x.x2 * om2}}};
}

/// cosh(d)^{-p}, stable for large |d|.
inline double cosh_kernel(double d, double p) {
  const double ad = std::abs(d);
  return std::exp(-p * (ad + std::log1p(std::exp(-2.0 * ad)) - std::numbers::ln2));
}

/// Inner z2-integral of the z-form kernel on the line y1:
///   int w~0(y1, s) / cosh(s - shift)^{1+alpha/2} ds.
inline double inner_z_integral(const BumpSpec& spec, double y1, double shift,
                               const Alpha& alpha, const QuadratureRule& rule) {
  const Band band = z2_band(spec, y1);
  if (band.empty()) return 0.0;
  const double p = alpha.kernel_power();
  return integrate(
      [&](double s) { return eval_omega0_z(spec, {y1, s}) * cosh_kernel(s - shift, p); },
      band.lo, band.hi, rule, z2_breaks(spec, y1));
}

/// Omega~(z1) = 2^{-2-alpha/2} int_{z1}^inf e^{-alpha y1/2} int w~(y, t) / cosh(y2)^{1+alpha/2}
/// with w~(y, t) = w~0(y1, y2 + X~(y1)); the outer integral runs over grid cells
/// (the interpolant of X~ is only C^0 at nodes) and drops contributions below
/// tail_eps times the running maximum, scanning from the top of the support.
inline double omega_tilde(double z1, const DisplacementProfile& disp, const BumpSpec& spec,
                          const Alpha& alpha, const QuadratureRule& rule) {
  if (spec.is_zero()) return 0.0;
  const double top = spec.box().z1_top();
  if (!(z1 < top)) return 0.0;
  if (disp.grid.z1_min > z1 + 1e-12 || disp.grid.z1_max < top) {
    throw DomainError("omega_tilde: displacement grid does not cover [z1, support top]");
  }
  std::vector<double> breaks = z1_breaks(spec);
  for (std::size_t i = 0; i < disp.grid.count; ++i) breaks.push_back(disp.grid.node(i));

  auto outer_sum = [&](const QuadratureRule& r) {
    auto nodes = composite_nodes(z1, top, r, breaks);
    double sum = 0.0;
    double abs_sum = 0.0;
    double running_max = 0.0;
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
      const double y = it->x;
      const double g = std::exp(-0.5 * alpha.value() * y) *
                       inner_z_integral(spec, y, disp.at(y), alpha, r);
      running_max = std::max(running_max, g);
      if (g < r.tail_eps * running_max) continue;
      sum += it->w * g;
      abs_sum += it->w * std::abs(g);
    }
    return std::pair{sum, abs_sum};
  };
  const auto [coarse, coarse_abs] = outer_sum(rule);
  const auto [fine, fine_abs] = outer_sum(rule.refined());
  if (std::abs(fine - coarse) > 1e-9 * fine_abs) {
    throw QuadratureError("omega_tilde: refinement changed the result beyond 1e-9");
  }
  return alpha.z_prefactor() * fine;
}

/// Relative gap between the z-route Omega~(z1) and the x-route Omega(e^{z1})
/// evaluated on the transported field induced by disp.
inline double consistency_omega(double z1, const DisplacementProfile& disp,
                                const BumpSpec& spec, const Alpha& alpha,
                                const QuadratureRule& rule) {
  if (spec.is_zero()) return 0.0;
  const double zt = omega_tilde(z1, disp, spec, alpha, rule);
  const double zx = omega_x(std::exp(z1), TransportedField{spec, disp}, alpha, rule);
  return std::abs(zt - zx) / std::max(std::abs(zt), 1e-300);
}

}  // namespace hsqg
