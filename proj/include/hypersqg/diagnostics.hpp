#pragma once

// Blow-up instrumentation for the reduced system: the root tracker
// Z(t) = max{z1 : z1 + X~(z1, t) = 0}, the indicator W = e^{alpha Z / 2}, the
// accumulated integral of sup |grad w|, and support monitoring.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hypersqg/biot_savart.hpp"
#include "hypersqg/displacement.hpp"
#include "hypersqg/errors.hpp"
#include "hypersqg/geometry.hpp"
#include "hypersqg/initial_data.hpp"

namespace hsqg {

struct DiagnosticsRecord {
  double t = 0.0;
  double Z = 0.0;
  double W = 1.0;
  double bkm = 0.0;
  double sup_grad = 0.0;
  double sup_omega_big = 0.0;
  double support_max_x1 = 0.0;
  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

/// Largest root of F = z1 + X~ on the linear interpolant of the grid values;
/// nullopt once F > 0 on the whole grid (the root passed z1_min).
inline std::optional<double> locate_Z(const DisplacementProfile& disp) {
  const auto& g = disp.grid;
  const std::size_t n = g.count;
  auto F = [&](std::size_t i) { return g.node(i) + disp.values[i]; };
  if (!(F(n - 1) > 0.0)) {
    throw DomainError("locate_Z: F must be positive at the top of the grid");
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const double f0 = F(i);
    const double f1 = F(i + 1);
    if (f0 == 0.0) return g.node(i);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      const double z0 = g.node(i);
      const double z1 = g.node(i + 1);
      // exact zero for F(z) = z
      return (z0 * f1 - z1 * f0) / (f1 - f0);
    }
  }
  return std::nullopt;
}

/// Material labels (z1, s) on each grid line, carried by the flow to
/// (z1, s - X~(z1)). Holds w~0 and its z-gradient at every label.
struct LagrangianLattice {
  struct Label {
    std::size_t node;
    double s;
    double value;
    double d1;
    double d2;
  };
  std::vector<Label> labels;
};

inline LagrangianLattice make_lattice(const Z1Grid& grid, const BumpSpec& spec,
                                      int per_line, std::uint64_t seed) {
  if (per_line < 1) throw DomainError("lattice needs at least one label per line");
  LagrangianLattice lat;
  if (spec.is_zero()) return lat;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double z1 = grid.node(i);
    const Band band = z2_band(spec, z1);
    if (band.empty()) continue;
    const double ds = (band.hi - band.lo) / per_line;
    for (int k = 0; k < per_line; ++k) {
      const double s = band.lo + (k + 0.5 + jitter(rng)) * ds;
      const double v = eval_omega0_z(spec, {z1, s});
      const auto [d1, d2] = grad_omega0_z(spec, {z1, s});
      lat.labels.push_back({i, s, v, d1, d2});
    }
  }
  return lat;
}

/// sup over the displaced lattice of |grad_x w| for w = w~0(z1, z2 + X~(z1)):
///   dw/dz1 = d1 w~0 + d2 w~0 * X~'(z1),  dw/dz2 = d2 w~0,
/// pushed to x through d/dx1 = (d/dz1 + d/dz2)/x1, d/dx2 = (d/dz1 - d/dz2)/x2.
inline double sup_grad_omega(const DisplacementProfile& disp, const LagrangianLattice& lat) {
  double best = 0.0;
  for (const auto& l : lat.labels) {
    const double X = disp.values[l.node];
    const double dz1 = l.d1 + l.d2 * disp.slope_at(l.node);
    const double dz2 = l.d2;
    const PointX x = z_to_x({disp.grid.node(l.node), l.s - X});
    const auto [g1, g2] = z_gradient_to_x(x, dz1, dz2);
    best = std::max(best, std::hypot(g1, g2));
  }
  return best;
}

/// Largest current x1 over labels carrying positive w0 (0 for the zero field).
inline double support_max_x1(const DisplacementProfile& disp, const LagrangianLattice& lat) {
  double best = 0.0;
  for (const auto& l : lat.labels) {
    if (!(l.value > 0.0)) continue;
    const double z1 = disp.grid.node(l.node);
    best = std::max(best, std::exp(0.5 * (z1 + l.s - disp.values[l.node])));
  }
  return best;
}

/// Trapezoid increment of int sup|grad w| dt.
inline double bkm_update(const DiagnosticsRecord& prev, double t_new, double sup_grad_new) {
  if (!(t_new > prev.t)) throw DomainError("bkm_update: time must increase");
  return prev.bkm + 0.5 * (t_new - prev.t) * (prev.sup_grad + sup_grad_new);
}

struct BlowupFit {
  double t0 = 0.0;
  double slope = 0.0;  // least-squares dW/dt
  double C_fit = 0.0;  // -2 slope / alpha
  double T_pred = 0.0;
  std::size_t points = 0;
  double envelope_slope = 0.0;     // -(alpha/2) C_floor
  double max_discrete_slope = 0.0;  // largest finite-difference slope of W in the window
  bool envelope_violation = false;
};

struct FitOptions {
  double Z1 = 0.0;
  double alpha = 0.5;
  double C_floor = 0.0;
  double z1_min = -30.0;
  double envelope_tolerance = 0.1;
};

/// Fits W(t) = e^{alpha Z/2} linearly on [t0, last record with Z > z1_min + 2],
/// t0 the first record time with Z <= Z1 - 1. The differential inequality
/// Z' <= -C e^{-alpha Z/2} is W' <= -(alpha/2) C.
inline BlowupFit blowup_fit(std::span<const DiagnosticsRecord> records, const FitOptions& opt) {
  auto first = std::find_if(records.begin(), records.end(),
                            [&](const auto& r) { return r.Z <= opt.Z1 - 1.0; });
  if (first == records.end()) {
    throw DomainError("blowup_fit: no record with Z <= Z1 - 1");
  }
  std::vector<DiagnosticsRecord> win;
  for (auto it = first; it != records.end() && it->Z > opt.z1_min + 2.0; ++it) {
    win.push_back(*it);
  }
  if (win.size() < 2) throw DomainError("blowup_fit: fewer than two records in the fit window");

  BlowupFit fit;
  fit.t0 = first->t;
  fit.points = win.size();
  double mt = 0.0;
  double mw = 0.0;
  for (const auto& r : win) {
    mt += r.t;
    mw += r.W;
  }
  mt /= static_cast<double>(win.size());
  mw /= static_cast<double>(win.size());
  double stt = 0.0;
  double stw = 0.0;
  for (const auto& r : win) {
    stt += (r.t - mt) * (r.t - mt);
    stw += (r.t - mt) * (r.W - mw);
  }
  if (!(stt > 0.0)) throw DomainError("blowup_fit: degenerate time window");
  fit.slope = stw / stt;
  fit.C_fit = -2.0 * fit.slope / opt.alpha;
  fit.T_pred = mt - mw / fit.slope;

  fit.envelope_slope = -0.5 * opt.alpha * opt.C_floor;
  const double allowed = fit.envelope_slope * (1.0 - opt.envelope_tolerance);
  fit.max_discrete_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < win.size(); ++i) {
    const double s = (win[i + 1].W - win[i].W) / (win[i + 1].t - win[i].t);
    fit.max_discrete_slope = std::max(fit.max_discrete_slope, s);
    if (s > allowed) fit.envelope_violation = true;
  }
  return fit;
}

struct Envelope {
  double measured;
  double bound;             // C e^{-(1+alpha/2)(y1 + B)}
  double admissible_bound;  // C e^{-(1+alpha/2)(|y1| + B + L)}, L = 2 max(|log n|, |log N|)
};

/// Weighted line integral int w~(y1, y2, t) / cosh(y2)^{1+alpha/2} dy2 against
/// two exponential lower envelopes in y1 and the shift bound B >= X~(y1).
inline Envelope lower_bound_envelope(const DisplacementProfile& disp, const BumpSpec& spec,
                                     double y1, double B, const Alpha& alpha,
                                     double C_floor, const QuadratureRule& rule) {
  const double X = disp.at(y1);
  if (X > B) throw DomainError("lower_bound_envelope: X~(y1) exceeds B");
  const double p = alpha.kernel_power();
  const double measured = inner_z_integral(spec, y1, X, alpha, rule);
  const auto box = spec.box();
  const double L = 2.0 * std::max(std::abs(std::log(box.n)), std::abs(std::log(box.N)));
  return {measured, C_floor * std::exp(-p * (y1 + B)),
          C_floor * std::exp(-p * (std::abs(y1) + B + L))};
}

/// Sharpest admissible shift bound on [y1, Z1]: max of X~ over the nodes there
/// and the interpolated endpoint values.
inline double envelope_B(const DisplacementProfile& disp, double y1, double Z1) {
  double B = std::max(disp.at(y1), disp.at(Z1));
  for (std::size_t i = 0; i < disp.grid.count; ++i) {
    const double z = disp.grid.node(i);
    if (z >= y1 && z <= Z1) B = std::max(B, disp.values[i]);
  }
  return B;
}

}  // namespace hsqg
