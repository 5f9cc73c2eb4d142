#pragma once

// Run orchestration: the simulate loop with checkpoint/resume, the oracle
// comparison against a checkpoint, and plot re-rendering from a CSV.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypersqg/config.hpp"
#include "hypersqg/diagnostics.hpp"
#include "hypersqg/evolve_z.hpp"
#include "hypersqg/io.hpp"
#include "hypersqg/reduced_model.hpp"
#include "hypersqg/svg.hpp"
#include "hypersqg/x_oracle.hpp"

namespace hsqg {

inline constexpr const char* kOutputDirEnv = "HYPERSQG_OUTPUT_DIR";

enum class RunStatus { completed, dt_underflow, escaped_grid, error };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::dt_underflow: return "dt_underflow";
    case RunStatus::escaped_grid: return "escaped-grid";
    case RunStatus::error: return "error";
  }
  return "error";
}

struct RunSummary {
  RunStatus status = RunStatus::completed;
  std::string message;
  std::string config_hash;
  long long steps = 0;
  DiagnosticsRecord final_record{};
  std::optional<AxisBound> axis;
  std::optional<BlowupFit> fit;
  std::optional<double> T_pred;  // blow-up statuses only
  fs::path output_dir;
};

struct SimulateOptions {
  std::optional<fs::path> resume;
  bool plots = true;
  // called after every accepted step; an exception ends the run with status error
  std::function<void(long long step, const DiagnosticsRecord&)> on_step;
};

inline fs::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::path(cfg.output_dir);
}

inline std::string checkpoint_name(long long step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "step_%08lld.chk", step);
  return buf;
}

/// Diagnostics for one accepted state; prev is null for the initial record.
inline DiagnosticsRecord make_record(const DisplacementProfile& disp, double Z,
                                     const DiagnosticsRecord* prev, const ReducedModel& model,
                                     const LagrangianLattice& lat) {
  DiagnosticsRecord r;
  r.t = disp.t;
  r.Z = Z;
  r.W = std::exp(0.5 * model.alpha().value() * Z);
  r.sup_grad = sup_grad_omega(disp, lat);
  r.bkm = prev ? bkm_update(*prev, disp.t, r.sup_grad) : 0.0;
  const auto om = model.omega_tilde(disp.values);
  r.sup_omega_big = om.empty() ? 0.0 : *std::max_element(om.begin(), om.end());
  r.support_max_x1 = support_max_x1(disp, lat);
  return r;
}

inline nlohmann::json record_json(const DiagnosticsRecord& r) {
  return {{"t", r.t},
          {"Z", r.Z},
          {"W", r.W},
          {"bkm", r.bkm},
          {"sup_grad", r.sup_grad},
          {"sup_omega_big", r.sup_omega_big},
          {"support_max_x1", r.support_max_x1}};
}

inline nlohmann::json summary_json(const RunSummary& s, const RunConfig& cfg) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = s.config_hash;
  j["status"] = to_string(s.status);
  j["message"] = s.message;
  j["steps"] = s.steps;
  j["alpha"] = cfg.alpha;
  j["z1_min"] = cfg.grid.z1_min;
  j["final_record"] = record_json(s.final_record);
  j["T_pred"] = s.T_pred ? nlohmann::json(*s.T_pred) : nlohmann::json(nullptr);
  if (s.axis) {
    j["Z1"] = s.axis->Z1;
    j["C_floor"] = s.axis->C;
  } else {
    j["Z1"] = nullptr;
    j["C_floor"] = nullptr;
  }
  if (s.fit) {
    const auto& f = *s.fit;
    j["fit"] = {{"t0", f.t0},
                {"slope", f.slope},
                {"C_fit", f.C_fit},
                {"T_pred", f.T_pred},
                {"points", f.points},
                {"envelope_slope", f.envelope_slope},
                {"max_discrete_slope", f.max_discrete_slope},
                {"envelope_violation", f.envelope_violation}};
  } else {
    j["fit"] = nullptr;
  }
  return j;
}

inline void write_outputs(const fs::path& dir, const std::vector<DiagnosticsRecord>& records,
                          const std::optional<PlotOverlay>& overlay, bool plots) {
  write_file(dir / "diagnostics.csv", records_to_csv(records));
  if (plots && !records.empty()) {
    for (const auto& [name, svg] : diagnostic_plots(records, overlay)) write_file(dir / name, svg);
  }
}

/// Time loop of adaptive RK4 on the reduced system with a diagnostics record
/// per accepted step. Stops at t_end, on dt underflow, or once Z leaves the grid.
inline RunSummary run_simulate(const RunConfig& cfg, const SimulateOptions& opt = {}) {
  RunSummary sum;
  sum.output_dir = resolve_output_dir(cfg);
  sum.config_hash = config_hash(cfg);
  const fs::path ckdir = sum.output_dir / "checkpoints";

  const Alpha alpha = cfg.alpha_param();
  const ReducedModel model(cfg.grid, cfg.bump, alpha, cfg.rule(), cfg.workers);
  const auto lat = make_lattice(cfg.grid, cfg.bump, cfg.lattice_per_line, cfg.seed);
  if (!cfg.bump.is_zero()) {
    try {
      sum.axis = estimate_Z1_C(cfg.bump, cfg.rule());
    } catch (const DomainError&) {
      // no axis threshold; the blow-up fit is unavailable
    }
  }

  DisplacementProfile disp(cfg.grid);
  double dt = cfg.controller.dt_init;
  long long step = 0;
  std::vector<DiagnosticsRecord> records;
  if (opt.resume) {
    const Checkpoint ck = checkpoint_from_string(read_file(*opt.resume), opt.resume->string());
    if (ck.config_hash != sum.config_hash) {
      throw ConfigError(opt.resume->string() + ": checkpoint config hash " + ck.config_hash +
                        " does not match the run config " + sum.config_hash);
    }
    disp = ck.disp;
    dt = ck.dt_next;
    step = ck.step;
    records = ck.records;
  } else {
    records.push_back(make_record(disp, 0.0, nullptr, model, lat));
  }

  auto save_checkpoint = [&](const std::string& name) {
    Checkpoint ck{emit_canonical(cfg), sum.config_hash, step, dt, disp, records};
    write_file(ckdir / name, checkpoint_to_string(ck));
  };

  sum.status = RunStatus::completed;
  try {
    while (disp.t < cfg.t_end) {
      const double remaining = cfg.t_end - disp.t;
      if (remaining < cfg.controller.dt_min) break;
      const auto r = step_adaptive(disp, std::min(dt, remaining), cfg.controller, model);
      if (r.status == StepStatus::dt_underflow) {
        sum.status = RunStatus::dt_underflow;
        sum.message = "step size fell below dt_min at t = " + detail::fmt_double(disp.t);
        break;
      }
      const auto Z = locate_Z(r.disp);
      if (!Z) {
        sum.status = RunStatus::escaped_grid;
        sum.message = "root of z1 + X~ passed z1_min at t = " + detail::fmt_double(r.disp.t);
        break;
      }
      const auto rec = make_record(r.disp, *Z, &records.back(), model, lat);
      disp = r.disp;
      dt = r.dt_next;
      ++step;
      records.push_back(rec);
      if (step % cfg.checkpoint_interval == 0) save_checkpoint(checkpoint_name(step));
      if (opt.on_step) opt.on_step(step, rec);
    }
  } catch (const std::exception& e) {
    sum.status = RunStatus::error;
    sum.message = e.what();
    save_checkpoint("error_" + checkpoint_name(step));
  }

  sum.steps = step;
  sum.final_record = records.back();
  std::optional<PlotOverlay> overlay;
  const bool blowup =
      sum.status == RunStatus::dt_underflow || sum.status == RunStatus::escaped_grid;
  if (blowup && sum.axis) {
    try {
      sum.fit = blowup_fit(records, {sum.axis->Z1, cfg.alpha, sum.axis->C, cfg.grid.z1_min, 0.1});
      sum.T_pred = sum.fit->T_pred;
      overlay = PlotOverlay{*sum.fit, cfg.alpha};
    } catch (const DomainError& e) {
      sum.message += std::string("; no blow-up fit: ") + e.what();
    }
  }
  write_outputs(sum.output_dir, records, overlay, opt.plots);
  write_file(sum.output_dir / "summary.json", summary_json(sum, cfg).dump(2) + "\n");
  return sum;
}

struct CompareResult {
  double t = 0.0;
  int K = 0;
  int steps = 0;
  double discrepancy = 0.0;
  double max_product_drift = 0.0;
};

/// Evolves the x-space particle oracle from t = 0 to the checkpoint time and
/// measures it against the checkpoint's displacement profile.
inline CompareResult run_compare(const fs::path& checkpoint, int K, double dt_max = 1e-3) {
  const Checkpoint ck = checkpoint_from_string(read_file(checkpoint), checkpoint.string());
  const RunConfig cfg = parse_config(ck.config_text);
  CompareResult res;
  res.t = ck.disp.t;
  res.K = K;
  if (cfg.bump.is_zero()) return res;
  ParticleCloud cloud = make_cloud(cfg.bump, K);
  res.steps = res.t > 0.0 ? static_cast<int>(std::ceil(res.t / dt_max - 1e-9)) : 0;
  for (int i = 0; i < res.steps; ++i) {
    cloud = oracle_step(cloud, res.t / res.steps, cfg.alpha);
  }
  res.discrepancy = compare_with_z(cloud, ck.disp);
  res.max_product_drift = max_product_drift(cloud);
  return res;
}

/// Re-renders the plots from a diagnostics CSV; the fit overlay is drawn when
/// a summary.json with the axis constants sits beside the CSV.
inline std::vector<fs::path> run_plot(const fs::path& csv, std::optional<fs::path> out_dir = {}) {
  const auto records = records_from_csv(read_file(csv), csv.string());
  if (records.empty()) throw IoError(csv.string() + ": no records to plot");
  const fs::path dir = out_dir ? *out_dir : csv.parent_path();
  std::optional<PlotOverlay> overlay;
  const fs::path summary = csv.parent_path() / "summary.json";
  if (fs::exists(summary)) {
    const auto j = nlohmann::json::parse(read_file(summary), nullptr, false);
    if (!j.is_discarded() && j.contains("Z1") && j["Z1"].is_number() && j["C_floor"].is_number()) {
      const double a = j["alpha"].get<double>();
      try {
        const auto fit = blowup_fit(records, {j["Z1"].get<double>(), a, j["C_floor"].get<double>(),
                                              j["z1_min"].get<double>(), 0.1});
        overlay = PlotOverlay{fit, a};
      } catch (const DomainError&) {
        // records never crossed Z1 - 1
      }
    }
  }
  std::vector<fs::path> written;
  for (const auto& [name, svg] : diagnostic_plots(records, overlay)) {
    write_file(dir / name, svg);
    written.push_back(dir / name);
  }
  return written;
}

}  // namespace hsqg
