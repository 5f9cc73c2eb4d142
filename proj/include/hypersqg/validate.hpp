#pragma once

// Invariant suite behind `hypersqg validate`: each check reports pass, fail or
// skipped with the measured value and its threshold. Failures never throw.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypersqg/biot_savart.hpp"
#include "hypersqg/config.hpp"
#include "hypersqg/diagnostics.hpp"
#include "hypersqg/evolve_z.hpp"
#include "hypersqg/geometry.hpp"
#include "hypersqg/reduced_model.hpp"
#include "hypersqg/x_oracle.hpp"

namespace hsqg {

enum class CheckStatus { pass, fail, skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "fail";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

struct ValidateOptions {
  int particles = 256;
  double oracle_t = 0.1;
  double oracle_dt = 1e-3;
  double oracle_tol = 1e-4;
  int picard_steps = 32;
  double short_run_t = 1.0;
};

struct ValidateReport {
  std::string config_hash;
  std::vector<CheckResult> checks;
  [[nodiscard]] int count(CheckStatus s) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                          [&](const auto& c) { return c.status == s; }));
  }
};

namespace detail {

inline CheckResult bounded(std::string name, double measured, double threshold,
                           std::string info = {}) {
  const bool ok = std::isfinite(measured) && measured <= threshold;
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, measured, threshold,
          std::move(info)};
}

inline CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    CheckResult r;
    r.name = name;
    r.status = CheckStatus::fail;
    r.detail = e.what();
    return r;
  }
}

inline CheckResult skip(std::string name, std::string why) {
  CheckResult r;
  r.name = std::move(name);
  r.detail = std::move(why);
  return r;
}

}  // namespace detail

inline ValidateReport run_validate(const RunConfig& cfg, const ValidateOptions& opt = {}) {
  using detail::bounded;
  using detail::guarded;
  ValidateReport rep;
  rep.config_hash = config_hash(cfg);
  auto& out = rep.checks;
  const Alpha alpha = cfg.alpha_param();
  const QuadratureRule rule = cfg.rule();
  const QuadratureRule reference{};  // fixed rule for the reference side of comparisons
  const BumpSpec& spec = cfg.bump;
  const bool zero = spec.is_zero();

  out.push_back(guarded("transform_roundtrip", [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> lg(std::log(1e-6), std::log(1e6));
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const PointX p{std::exp(lg(rng)), std::exp(lg(rng))};
      const PointX q = z_to_x(x_to_z(p));
      worst = std::max({worst, std::abs(q.x1 - p.x1) / p.x1, std::abs(q.x2 - p.x2) / p.x2});
    }
    return bounded("transform_roundtrip", worst, 1e-12, "10^4 log-uniform points in [1e-6, 1e6]^2");
  }));

  out.push_back(guarded("support_strip_containment", [&] {
    if (zero) return detail::skip("support_strip_containment", "zero field has no support");
    const auto box = spec.box();
    const auto strip = support_strip(box);
    int outside = 0;
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) {
        const PointX p{box.n + (box.N - box.n) * (i + 0.5) / 64.0, box.M * (j + 0.5) / 64.0};
        if (!strip.contains(x_to_z(p))) ++outside;
      }
    }
    return bounded("support_strip_containment", outside, 0.0, "support-box lattice points outside the strip");
  }));

  std::optional<AxisBound> axis;
  if (zero) {
    out.push_back(detail::skip("axis_bound", "zero field: no axis-trace constant"));
  } else {
    out.push_back(guarded("axis_bound", [&] {
      axis = estimate_Z1_C(spec, rule);
      CheckResult r{"axis_bound", axis->C > 0.0 ? CheckStatus::pass : CheckStatus::fail, axis->C,
                    0.0, "Z1 = " + detail::fmt_double(axis->Z1)};
      return r;
    }));
  }

  if (zero) {
    for (const char* n : {"cross_section_identity", "kernel_dual_route", "grid_model_vs_direct",
                          "incompressibility_trace", "picard_vs_rk4", "oracle_agreement",
                          "oracle_product_conservation", "record_monotonicity",
                          "support_nonincreasing", "support_strict_decrease",
                          "lower_bound_envelope", "lower_bound_envelope_admissible"}) {
      out.push_back(detail::skip(n, "zero field: vacuous"));
    }
    return rep;
  }

  out.push_back(guarded("cross_section_identity", [&] {
    const double top = spec.box().z1_top();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double z1 = top - 0.05 - (top + 8.0) * i / 19.0;
      const double a = cross_section(spec, z1, rule).value;
      const double b = cross_section_z(spec, z1, rule);
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
    }
    return bounded("cross_section_identity", worst, 1e-8, "x-side vs z-side line integral, 20 z1");
  }));

  const DisplacementProfile rest(cfg.grid);
  out.push_back(guarded("kernel_dual_route", [&] {
    double worst = 0.0;
    for (double z1 : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5}) {
      worst = std::max(worst, consistency_omega(z1, rest, spec, alpha, rule));
    }
    return bounded("kernel_dual_route", worst, 1e-6, "z-route Omega~ vs x-route Omega at t = 0");
  }));

  const ReducedModel model(cfg.grid, spec, alpha, rule, cfg.workers);
  out.push_back(guarded("grid_model_vs_direct", [&] {
    const auto om = model.omega_tilde(rest.values);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.grid.count; i += std::max<std::size_t>(1, cfg.grid.count / 16)) {
      const double z1 = cfg.grid.node(i);
      if (z1 < -6.0) continue;
      const double ref = omega_x(std::exp(z1), InitialField{spec}, alpha, reference);
      if (ref == 0.0) continue;
      worst = std::max(worst, std::abs(om[i] - ref) / ref);
    }
    return bounded("grid_model_vs_direct", worst, 1e-6,
                   "tabulated grid sweep vs nested quadrature at the default rule");
  }));

  out.push_back(guarded("incompressibility_trace", [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const PointX p{0.2 + 0.15 * i, 0.1 + 0.05 * ((7 * i) % 20)};
      const auto J = grad_u(p, InitialField{spec}, alpha, rule);
      const double scale = std::max({std::abs(J[0][0]), std::abs(J[1][1]), 1e-300});
      worst = std::max(worst, std::abs(J[0][0] + J[1][1]) / scale);
    }
    return bounded("incompressibility_trace", worst, 1e-12, "|tr grad u| / max diagonal, 20 points");
  }));

  out.push_back(guarded("picard_vs_rk4", [&] {
    const double T = opt.oracle_t;
    const auto pic = picard_solve(T, cfg.grid, model, opt.picard_steps, 50, 1e-12);
    DisplacementProfile d(cfg.grid);
    double dt = cfg.controller.dt_init;
    while (d.t < T) {
      const auto r = step_adaptive(d, std::min(dt, T - d.t), cfg.controller, model);
      if (r.status != StepStatus::accepted) throw SolverError("dt underflow before T");
      d = r.disp;
      dt = r.dt_next;
    }
    double worst = 0.0;
    const auto& last = pic.profiles.back().values;
    for (std::size_t i = 0; i < last.size(); ++i) worst = std::max(worst, std::abs(last[i] - d.values[i]));
    return bounded("picard_vs_rk4", worst, 1e-5, "sup-norm gap at T = " + detail::fmt_double(T));
  }));

  ParticleCloud cloud;
  bool cloud_ok = false;
  out.push_back(guarded("oracle_agreement", [&] {
    const double T = opt.oracle_t;
    cloud = make_cloud(spec, opt.particles);
    const int steps = static_cast<int>(std::ceil(T / opt.oracle_dt - 1e-9));
    for (int i = 0; i < steps; ++i) cloud = oracle_step(cloud, T / steps, cfg.alpha);
    cloud_ok = true;
    DisplacementProfile d(cfg.grid);
    double dt = cfg.controller.dt_init;
    while (d.t < T) {
      const auto r = step_adaptive(d, std::min(dt, T - d.t), cfg.controller, model);
      if (r.status != StepStatus::accepted) throw SolverError("dt underflow before T");
      d = r.disp;
      dt = r.dt_next;
    }
    return bounded("oracle_agreement", compare_with_z(cloud, d), opt.oracle_tol,
                   "x-space particles vs reduced profile, K = " + std::to_string(opt.particles));
  }));

  if (cloud_ok) {
    out.push_back(bounded("oracle_product_conservation", max_product_drift(cloud), 1e-8,
                          "max relative drift of x1 x2 per particle"));
  } else {
    out.push_back(detail::skip("oracle_product_conservation", "oracle run did not complete"));
  }

  {
    // One short run feeds three record-monotonicity checks.
    int z_rise = 0, s_rise = 0, s_flat = 0, steps = 0;
    std::string err;
    try {
      const auto lat = make_lattice(cfg.grid, spec, cfg.lattice_per_line, cfg.seed);
      DisplacementProfile d(cfg.grid);
      double dt = cfg.controller.dt_init;
      double Zp = 0.0, sp = support_max_x1(d, lat), gp = sup_grad_omega(d, lat);
      DiagnosticsRecord prev{0.0, 0.0, 1.0, 0.0, gp, 0.0, sp};
      while (d.t < opt.short_run_t) {
        const auto r = step_adaptive(d, std::min(dt, opt.short_run_t - d.t), cfg.controller, model);
        if (r.status != StepStatus::accepted) break;
        d = r.disp;
        dt = r.dt_next;
        const auto Z = locate_Z(d);
        if (!Z) break;
        ++steps;
        const double s = support_max_x1(d, lat);
        const double g = sup_grad_omega(d, lat);
        const double bkm = bkm_update(prev, d.t, g);
        if (*Z > Zp || bkm < prev.bkm) ++z_rise;
        if (s > sp) ++s_rise;
        if (!(s < sp)) ++s_flat;
        prev = {d.t, *Z, 0.0, bkm, g, 0.0, s};
        Zp = *Z;
        sp = s;
      }
    } catch (const std::exception& e) {
      err = e.what();
    }
    auto mk = [&](const char* name, int bad, const char* what) {
      if (!err.empty()) return CheckResult{name, CheckStatus::fail, NAN, 0.0, err};
      return bounded(name, bad, 0.0, std::string(what) + " (" + std::to_string(steps) + " steps)");
    };
    out.push_back(mk("record_monotonicity", z_rise, "steps where Z rose or bkm fell"));
    out.push_back(mk("support_nonincreasing", s_rise, "steps where support_max_x1 rose"));
    out.push_back(mk("support_strict_decrease", s_flat,
                     "steps where support_max_x1 did not strictly decrease"));
  }

  if (!axis) {
    out.push_back(detail::skip("lower_bound_envelope", "no axis constant"));
    out.push_back(detail::skip("lower_bound_envelope_admissible", "no axis constant"));
  } else {
    std::vector<double> ys;
    for (int k = 1; k <= 5; ++k) ys.push_back(axis->Z1 - 0.5 * k);
    double worst = -std::numeric_limits<double>::infinity();
    double worst_adm = worst;
    for (double y1 : ys) {
      const double B = envelope_B(rest, y1, axis->Z1);
      const auto e = lower_bound_envelope(rest, spec, y1, B, alpha, axis->C, rule);
      worst = std::max(worst, e.bound / e.measured);
      worst_adm = std::max(worst_adm, e.admissible_bound / e.measured);
    }
    out.push_back(bounded("lower_bound_envelope", worst, 1.0,
                          "max bound/measured with bound C e^{-(1+alpha/2)(y1+B)}, t = 0"));
    out.push_back(bounded("lower_bound_envelope_admissible", worst_adm, 1.0,
                          "max bound/measured with bound C e^{-(1+alpha/2)(|y1|+B+L)}, t = 0"));
  }
  return rep;
}

inline nlohmann::json report_json(const ValidateReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"status", to_string(c.status)},
                      {"measured", std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(nullptr)},
                      {"threshold", std::isfinite(c.threshold) ? nlohmann::json(c.threshold) : nlohmann::json(nullptr)},
                      {"detail", c.detail}});
  }
  return {{"tool_version", kToolVersion},
          {"config_hash", rep.config_hash},
          {"checks", checks},
          {"passed", rep.count(CheckStatus::pass)},
          {"failed", rep.count(CheckStatus::fail)},
          {"skipped", rep.count(CheckStatus::skipped)}};
}

}  // namespace hsqg
