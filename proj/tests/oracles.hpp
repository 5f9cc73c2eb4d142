#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature, kernels or coordinate helpers: the bump is written out
// in closed form, integrals use composite Simpson rules, and the z-side kernel
// is evaluated through x-space distances rather than the cosh reduction.

#include <cmath>
#include <algorithm>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

struct Bump {
  double A = 1.0;
  double c = 2.0;
  double r = 1.0;
  double M = 1.0;
  bool plateau = true;

  [[nodiscard]] double n() const { return c - r; }
  [[nodiscard]] double N() const { return c + r; }

  [[nodiscard]] double operator()(double x1, double x2) const {
    if (x1 < c - r || x1 > c + r || x2 < 0.0 || x2 > M) return 0.0;
    const double f1 = std::pow(std::cos(std::numbers::pi * (x1 - c) / (2.0 * r)), 2);
    double f2;
    if (plateau) {
      f2 = x2 <= M / 2 ? 1.0 : std::pow(std::cos(std::numbers::pi * (x2 - M / 2) / M), 2);
    } else {
      f2 = std::pow(std::sin(std::numbers::pi * x2 / M), 2);
    }
    return A * f1 * f2;
  }
};

/// Composite Simpson on [a, b] with 2m subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  if (!(b > a)) return 0.0;
  const int n = 2 * m;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Simpson on each piece of [a, b] cut at the breakpoints that fall inside.
inline double simpson_pieces(const std::function<double(double)>& f, double a, double b,
                             std::vector<double> cuts, int m) {
  std::vector<double> pts{a};
  std::sort(cuts.begin(), cuts.end());
  for (double x : cuts) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += simpson(f, pts[i], pts[i + 1], m);
  return s;
}

/// Omega(a) = int_{y1 y2 >= a} w0(y) |y|^{-(2+alpha)} dy, iterated y1-outer.
inline double omega_x(double a, const Bump& w, double alpha, int m = 400) {
  const double p = 1.0 + alpha / 2.0;
  const double lo = a > 0.0 ? std::max(w.n(), a / w.M) : w.n();
  if (!(w.N() > lo)) return 0.0;
  auto inner = [&](double y1) {
    const double y2lo = a / y1;
    return simpson_pieces(
        [&](double y2) { return w(y1, y2) * std::pow(y1 * y1 + y2 * y2, -p); }, y2lo, w.M,
        {w.M / 2}, m);
  };
  std::vector<double> cuts;
  if (a > 0.0) cuts.push_back(2.0 * a / w.M);
  return simpson_pieces(inner, lo, w.N(), cuts, m);
}

/// Same integral written over z-coordinates w = (log y1 y2, log y1/y2) for the
/// field w0 shifted by X along each w1-line: the integrand at (w1, s) is
/// w0(y(w1, s)) / |y(w1, s - X(w1))|^{2+alpha} times the Jacobian e^{w1}/2.
inline double omega_tilde(double z1, const Bump& w, double alpha,
                          const std::function<double(double)>& X, int m = 400) {
  const double p = 1.0 + alpha / 2.0;
  const double top = std::log(w.N() * w.M);
  if (!(top > z1)) return 0.0;
  auto yx = [](double w1, double w2) {
    return std::pair{std::exp(0.5 * (w1 + w2)), std::exp(0.5 * (w1 - w2))};
  };
  auto inner = [&](double w1) {
    const double shift = X(w1);
    // x1 in [n, N] and x2 <= M on the line w1; the x2 = M/2 kink sits at s = w1 - 2 log(M/2)
    const double s_lo = std::max(2.0 * std::log(w.n()) - w1, w1 - 2.0 * std::log(w.M));
    const double s_hi = 2.0 * std::log(w.N()) - w1;
    return simpson_pieces(
        [&](double s) {
          const auto [a1, a2] = yx(w1, s);
          const auto [b1, b2] = yx(w1, s - shift);
          return w(a1, a2) * std::pow(b1 * b1 + b2 * b2, -p) * 0.5 * std::exp(w1);
        },
        s_lo, s_hi, {w1 - 2.0 * std::log(w.M / 2)}, m);
  };
  const double n = w.n(), N = w.N(), M = w.M;
  return simpson_pieces(inner, z1, top,
                        {std::log(n * M), std::log(n * M / 2), std::log(N * M / 2)}, m);
}

/// I(z1) = int w0(x1, e^{z1}/x1) * 2 / x1 dx1 at high resolution.
inline double cross_section(double z1, const Bump& w, int m = 2000) {
  const double a = std::exp(z1);
  const double lo = std::max(w.n(), a / w.M);
  if (!(w.N() > lo)) return 0.0;
  return 2.0 * simpson_pieces([&](double x1) { return w(x1, a / x1) / x1; }, lo, w.N(),
                              {2.0 * a / w.M}, m);
}

/// Central difference of f at x with step h.
inline double central(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
