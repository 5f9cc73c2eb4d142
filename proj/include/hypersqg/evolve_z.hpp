#pragma once

// Time evolution of the displacement profile, dX~/dt = 2 Omega~(z1, t):
// classical RK4, step-doubling error control, and a Picard iteration on the
// integral form X~(t) = int_0^t 2 Omega~[X~(s)] ds as an independent route.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "hypersqg/displacement.hpp"
#include "hypersqg/errors.hpp"

namespace hsqg {

/// Any map from a profile's values to dX~/dt at every node.
template <typename F>
concept RhsFunction = requires(const F& f, std::span<const double> x) {
  { f(x) } -> std::convertible_to<std::vector<double>>;
};

inline void check_profile_invariants(const DisplacementProfile& next,
                                     const DisplacementProfile& prev) {
  const double tol = 1e-9 * std::max(1.0, next.max_value());
  for (std::size_t i = 0; i < next.values.size(); ++i) {
    if (next.values[i] < -tol) {
      throw SolverError("displacement became negative at node " + std::to_string(i));
    }
    if (next.values[i] < prev.values[i] - tol) {
      throw SolverError("displacement decreased in time at node " + std::to_string(i));
    }
    if (i + 1 < next.values.size() && next.values[i + 1] > next.values[i] + tol) {
      throw SolverError("displacement lost monotonicity in z1 at node " +
                        std::to_string(i) + " (under-resolved quadrature?)");
    }
  }
}

namespace detail {

template <RhsFunction Rhs>
std::vector<double> rk4_values(std::span<const double> x, double dt, const Rhs& f,
                               const std::vector<double>* k1_in = nullptr) {
  const std::size_t n = x.size();
  const std::vector<double> k1 = k1_in ? *k1_in : std::vector<double>(f(x));
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  const std::vector<double> k2 = f(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  const std::vector<double> k3 = f(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  const std::vector<double> k4 = f(tmp);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace detail

template <RhsFunction Rhs>
DisplacementProfile step_rk4(const DisplacementProfile& disp, double dt, const Rhs& f) {
  if (!(dt > 0.0)) throw DomainError("step_rk4: dt must be positive");
  DisplacementProfile next(disp.grid, detail::rk4_values(disp.values, dt, f), disp.t + dt);
  check_profile_invariants(next, disp);
  return next;
}

struct StepController {
  double dt_init = 1e-2;
  double safety = 0.9;
  double atol = 1e-8;
  double rtol = 1e-6;
  double dt_min = 1e-10;
  double max_growth = 5.0;
  double max_shrink = 0.2;

  void validate() const {
    if (!(dt_init > 0.0)) throw DomainError("controller.dt_init must be positive");
    if (!(safety > 0.0 && safety <= 1.0)) throw DomainError("controller.safety must lie in (0, 1]");
    if (!(atol >= 0.0) || !(rtol >= 0.0) || !(atol + rtol > 0.0)) {
      throw DomainError("controller tolerances must be nonnegative and not both zero");
    }
    if (!(dt_min > 0.0 && dt_min < dt_init)) {
      throw DomainError("controller.dt_min must lie in (0, dt_init)");
    }
  }
  friend bool operator==(const StepController&, const StepController&) = default;
};

enum class StepStatus { accepted, dt_underflow };

struct StepResult {
  DisplacementProfile disp;
  double dt_used = 0.0;
  double dt_next = 0.0;
  double error = 0.0;  // scaled error estimate of the accepted step
  StepStatus status = StepStatus::accepted;
};

/// Scaled step-doubling error: max |half - full| / (atol + rtol |half|) / 15.
inline double doubling_error(std::span<const double> full, std::span<const double> half,
                             const StepController& ctrl) {
  double err = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const double scale = ctrl.atol + ctrl.rtol * std::abs(half[i]);
    err = std::max(err, std::abs(half[i] - full[i]) / scale);
  }
  return err / 15.0;
}

/// One accepted step of RK4 with step-doubling control, starting from dt_try.
/// Returns status dt_underflow (state unchanged) once dt falls below dt_min.
template <RhsFunction Rhs>
StepResult step_adaptive(const DisplacementProfile& disp, double dt_try,
                         const StepController& ctrl, const Rhs& f) {
  const std::vector<double> k1 = f(disp.values);
  double dt = dt_try;
  while (true) {
    if (dt < ctrl.dt_min) {
      return {disp, 0.0, dt, 0.0, StepStatus::dt_underflow};
    }
    const auto full = detail::rk4_values(disp.values, dt, f, &k1);
    const auto mid = detail::rk4_values(disp.values, 0.5 * dt, f, &k1);
    const auto half = detail::rk4_values(mid, 0.5 * dt, f);
    const double err = doubling_error(full, half, ctrl);
    const double factor =
        err > 0.0 ? ctrl.safety * std::pow(err, -0.2) : ctrl.max_growth;
    if (err <= 1.0) {
      DisplacementProfile next(disp.grid, half, disp.t + dt);
      check_profile_invariants(next, disp);
      return {std::move(next), dt, dt * std::clamp(factor, ctrl.max_shrink, ctrl.max_growth),
              err, StepStatus::accepted};
    }
    dt *= std::clamp(factor, ctrl.max_shrink, 1.0);
  }
}

struct PicardResult {
  std::vector<DisplacementProfile> profiles;  // at t_j = j T / steps
  int iterations = 0;
  std::vector<double> update_norms;
};

/// Fixed-point iteration of X~(t_j) = int_0^{t_j} f(X~(s)) ds on a uniform time
/// mesh with the trapezoid rule, from X~ = 0; stops when the sup-norm update < tol.
template <RhsFunction Rhs>
PicardResult picard_solve(double T, const Z1Grid& grid, const Rhs& f, int time_steps,
                          int max_iter, double tol) {
  if (!(T > 0.0) || time_steps < 1) throw DomainError("picard_solve: need T > 0 and steps >= 1");
  const double dt = T / time_steps;
  const auto levels = static_cast<std::size_t>(time_steps) + 1;
  std::vector<std::vector<double>> cur(levels, std::vector<double>(grid.count, 0.0));
  PicardResult res;
  int growth_run = 0;
  for (int k = 0; k < max_iter; ++k) {
    std::vector<std::vector<double>> speed(levels);
    for (std::size_t j = 0; j < levels; ++j) speed[j] = f(cur[j]);
    std::vector<std::vector<double>> next(levels, std::vector<double>(grid.count, 0.0));
    double norm = 0.0;
    for (std::size_t j = 1; j < levels; ++j) {
      for (std::size_t i = 0; i < grid.count; ++i) {
        next[j][i] = next[j - 1][i] + 0.5 * dt * (speed[j - 1][i] + speed[j][i]);
        norm = std::max(norm, std::abs(next[j][i] - cur[j][i]));
      }
    }
    if (!res.update_norms.empty() && norm > res.update_norms.back()) {
      if (++growth_run >= 3) {
        throw SolverError("picard_solve: update norm grew for 3 consecutive iterations");
      }
    } else {
      growth_run = 0;
    }
    res.update_norms.push_back(norm);
    cur = std::move(next);
    if (norm < tol) {
      res.iterations = k + 1;
      for (std::size_t j = 0; j < levels; ++j) {
        res.profiles.emplace_back(grid, cur[j], static_cast<double>(j) * dt);
      }
      return res;
    }
  }
  throw SolverError("picard_solve: no convergence within max_iter iterations");
}

}  // namespace hsqg
