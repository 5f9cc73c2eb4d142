#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypersqg/run.hpp"
#include "hypersqg/validate.hpp"

namespace {

hsqg::RunConfig load_config(const std::string& path, const std::vector<std::string>& sets) {
  try {
    return hsqg::parse_config(hsqg::read_file(path), sets);
  } catch (const hsqg::ConfigError& e) {
    throw hsqg::ConfigError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic SQG blow-up simulator and verification harness"};
  app.set_version_flag("--version", hsqg::kToolVersion);
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  std::string resume;
  auto* sim = app.add_subcommand("simulate", "Evolve the reduced system and record diagnostics");
  sim->add_option("--config", config, "YAML configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("--set", sets, "Override a key, e.g. --set grid.count=2048");
  sim->add_option("--resume", resume, "Continue from a checkpoint")->check(CLI::ExistingFile);

  int particles = 256;
  auto* val = app.add_subcommand("validate", "Run the invariant suite and report pass/fail");
  val->add_option("--config", config, "YAML configuration")->required()->check(CLI::ExistingFile);
  val->add_option("--set", sets, "Override a key");
  val->add_option("--particles", particles, "Oracle lattice size K")->check(CLI::PositiveNumber);

  std::string checkpoint;
  int K = 128;
  double oracle_dt = 1e-3;
  auto* cmp = app.add_subcommand("compare", "Run the x-space particle oracle against a checkpoint");
  cmp->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  cmp->add_option("--particles", K, "Oracle lattice size K")->required()->check(CLI::PositiveNumber);
  cmp->add_option("--dt", oracle_dt, "Largest oracle time step")->check(CLI::PositiveNumber);

  std::string csv;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Re-render SVG plots from a diagnostics CSV");
  plot->add_option("--csv", csv, "Diagnostics CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output directory (default: beside the CSV)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const auto cfg = load_config(config, sets);
      hsqg::SimulateOptions opt;
      if (!resume.empty()) opt.resume = resume;
      const auto s = hsqg::run_simulate(cfg, opt);
      std::cout << hsqg::summary_json(s, cfg).dump(2) << "\n";
      return s.status == hsqg::RunStatus::error ? 1 : 0;
    }
    if (*val) {
      const auto cfg = load_config(config, sets);
      hsqg::ValidateOptions opt;
      opt.particles = particles;
      const auto rep = hsqg::run_validate(cfg, opt);
      const auto j = hsqg::report_json(rep);
      hsqg::write_file(hsqg::resolve_output_dir(cfg) / "validate.json", j.dump(2) + "\n");
      std::cout << j.dump(2) << "\n";
      return rep.count(hsqg::CheckStatus::fail) == 0 ? 0 : 2;
    }
    if (*cmp) {
      const auto r = hsqg::run_compare(checkpoint, K, oracle_dt);
      const nlohmann::json j{{"t", r.t},
                             {"particles", r.K},
                             {"steps", r.steps},
                             {"discrepancy", r.discrepancy},
                             {"max_product_drift", r.max_product_drift}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*plot) {
      std::optional<std::filesystem::path> out;
      if (!plot_out.empty()) out = plot_out;
      for (const auto& p : hsqg::run_plot(csv, out)) std::cout << p.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "hypersqg: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
