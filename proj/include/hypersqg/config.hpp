#pragma once

// Run configuration: one YAML document, validated at parse time with the
// source line of the offending key, and a canonical emission form whose
// SHA-256 identifies the run.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/sha.h>
#include <yaml-cpp/yaml.h>

#include "hypersqg/biot_savart.hpp"
#include "hypersqg/displacement.hpp"
#include "hypersqg/errors.hpp"
#include "hypersqg/evolve_z.hpp"
#include "hypersqg/initial_data.hpp"
#include "hypersqg/quadrature.hpp"

namespace hsqg {

inline constexpr const char* kToolVersion = "hypersqg 1.0.0";

struct RunConfig {
  double alpha = 0.5;
  BumpSpec bump{};
  Z1Grid grid{};
  int quad_order = 8;
  double quad_panels_per_unit = 8.0;
  double quad_tail_eps = 1e-14;
  StepController controller{};
  double t_end = 100.0;
  std::string output_dir = "out";
  int checkpoint_interval = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  int lattice_per_line = 32;

  [[nodiscard]] QuadratureRule rule() const {
    return {quad_order, quad_panels_per_unit, quad_tail_eps};
  }
  [[nodiscard]] Alpha alpha_param() const { return Alpha(alpha); }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string where(const YAML::Node& node, const std::string& path) {
  const auto mark = node.Mark();
  std::string s;
  if (mark.line >= 0) s = "line " + std::to_string(mark.line + 1) + ": ";
  return s + path;
}

template <typename T>
T read(const YAML::Node& parent, const std::string& key, const std::string& path, T fallback,
       bool required = false) {
  const YAML::Node node = parent[key];
  if (!node) {
    if (required) {
      throw ConfigError(detail::where(parent, path) + ": missing required key");
    }
    return fallback;
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(node, path) + ": cannot read value '" +
                      (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'");
  }
}

inline void check(bool ok, const YAML::Node& node, const std::string& path,
                  const std::string& reason) {
  if (!ok) throw ConfigError(where(node, path) + ": " + reason);
}

inline YAML::Node child_or_self(const YAML::Node& parent, const std::string& key) {
  const YAML::Node n = parent[key];
  return n ? n : parent;
}

inline void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const YAML::Node value = YAML::Load(assignment.substr(eq + 1));
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) keys.push_back(k);
  // yaml-cpp nodes are handles, so walk with fresh handles rather than reassigning
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node next = chain.back()[keys[i]];
    if (!next.IsDefined() || next.IsNull()) {
      chain.back()[keys[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[keys[i]];
    }
    chain.push_back(next);
  }
  chain.back()[keys.back()] = value;
}

}  // namespace detail

/// Parses and validates a configuration; overrides are dotted key=value pairs.
inline RunConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides = {}) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("configuration must be a mapping");
  for (const auto& o : overrides) detail::apply_override(root, o);

  using detail::check;
  using detail::read;
  RunConfig c;
  c.alpha = read<double>(root, "alpha", "alpha", c.alpha, true);
  check(c.alpha > 0.0 && c.alpha < 1.0, detail::child_or_self(root, "alpha"), "alpha",
        "must lie in the open interval (0, 1)");

  const YAML::Node bump = root["bump"];
  check(bool(bump) && bump.IsMap(), root, "bump", "missing mapping");
  BumpSpec& b = c.bump;
  b.amplitude = read<double>(bump, "amplitude", "bump.amplitude", 1.0, true);
  b.center = read<double>(bump, "center", "bump.center", 2.0, true);
  b.radius = read<double>(bump, "radius", "bump.radius", 1.0, true);
  b.height = read<double>(bump, "height", "bump.height", 1.0, true);
  const auto prof = read<std::string>(bump, "profile", "bump.profile", "plateau");
  try {
    b.profile = profile_from_string(prof);
    b.validate();
  } catch (const DomainError& e) {
    throw ConfigError(detail::where(bump, "bump") + ": " + e.what());
  }

  const YAML::Node grid = root["grid"] ? root["grid"] : YAML::Node(YAML::NodeType::Map);
  const double top = b.box().z1_top();
  const double lo = read<double>(grid, "z1_min", "grid.z1_min", -30.0);
  const double hi = read<double>(grid, "z1_max", "grid.z1_max",
                                 std::ceil((top + 1.1) * 100.0) / 100.0);
  const auto count = read<long long>(grid, "count", "grid.count", 1024);
  check(count >= 16, detail::child_or_self(grid, "count"), "grid.count", "must be >= 16");
  check(hi >= top + 1.0, detail::child_or_self(grid, "z1_max"), "grid.z1_max",
        "must reach at least 1 above the support top log(N M) = " + std::to_string(top));
  check(lo < hi, detail::child_or_self(grid, "z1_min"), "grid.z1_min", "must be below z1_max");
  c.grid = Z1Grid(lo, hi, static_cast<std::size_t>(count));

  const YAML::Node quad = root["quadrature"] ? root["quadrature"] : YAML::Node(YAML::NodeType::Map);
  c.quad_order = read<int>(quad, "order", "quadrature.order", 8);
  check(c.quad_order >= 1 && c.quad_order <= 64, detail::child_or_self(quad, "order"),
        "quadrature.order", "must lie in [1, 64]");
  c.quad_panels_per_unit = read<double>(quad, "panels_per_unit", "quadrature.panels_per_unit", 8.0);
  check(c.quad_panels_per_unit > 0.0, detail::child_or_self(quad, "panels_per_unit"),
        "quadrature.panels_per_unit", "must be positive");
  c.quad_tail_eps = read<double>(quad, "tail_eps", "quadrature.tail_eps", 1e-14);
  check(c.quad_tail_eps >= 0.0 && c.quad_tail_eps < 1.0, detail::child_or_self(quad, "tail_eps"),
        "quadrature.tail_eps", "must lie in [0, 1)");

  const YAML::Node ctl = root["controller"] ? root["controller"] : YAML::Node(YAML::NodeType::Map);
  StepController& s = c.controller;
  s.dt_init = read<double>(ctl, "dt_init", "controller.dt_init", s.dt_init);
  s.safety = read<double>(ctl, "safety", "controller.safety", s.safety);
  s.atol = read<double>(ctl, "atol", "controller.atol", s.atol);
  s.rtol = read<double>(ctl, "rtol", "controller.rtol", s.rtol);
  s.dt_min = read<double>(ctl, "dt_min", "controller.dt_min", s.dt_min);
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(detail::where(ctl, "controller") + ": " + e.what());
  }

  c.t_end = read<double>(root, "t_end", "t_end", c.t_end);
  check(c.t_end > 0.0, detail::child_or_self(root, "t_end"), "t_end", "must be positive");
  c.output_dir = read<std::string>(root, "output_dir", "output_dir", c.output_dir);
  c.checkpoint_interval = read<int>(root, "checkpoint_interval", "checkpoint_interval",
                                    c.checkpoint_interval);
  check(c.checkpoint_interval >= 1, detail::child_or_self(root, "checkpoint_interval"),
        "checkpoint_interval", "must be >= 1");
  c.seed = read<std::uint64_t>(root, "seed", "seed", c.seed);
  c.workers = read<int>(root, "workers", "workers", c.workers);
  check(c.workers >= 1, detail::child_or_self(root, "workers"), "workers", "must be >= 1");
  c.lattice_per_line = read<int>(root, "lattice_per_line", "lattice_per_line", c.lattice_per_line);
  check(c.lattice_per_line >= 1, detail::child_or_self(root, "lattice_per_line"),
        "lattice_per_line", "must be >= 1");

  // The truncation floor must sit well below the axis-trace threshold Z1.
  if (!b.is_zero()) {
    try {
      const auto ab = estimate_Z1_C(b, QuadratureRule{});
      check(lo < ab.Z1 - 5.0, detail::child_or_self(grid, "z1_min"), "grid.z1_min",
            "must lie below Z1 - 5 = " + std::to_string(ab.Z1 - 5.0));
    } catch (const DomainError&) {
      // axis-degenerate data: no threshold to respect
    }
  }
  return c;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// Canonical emission: fixed key order, every default written out, doubles at
/// round-trip precision.
inline std::string emit_canonical(const RunConfig& c) {
  using detail::fmt_double;
  std::ostringstream o;
  o << "alpha: " << fmt_double(c.alpha) << "\n"
    << "bump:\n"
    << "  amplitude: " << fmt_double(c.bump.amplitude) << "\n"
    << "  center: " << fmt_double(c.bump.center) << "\n"
    << "  radius: " << fmt_double(c.bump.radius) << "\n"
    << "  height: " << fmt_double(c.bump.height) << "\n"
    << "  profile: " << to_string(c.bump.profile) << "\n"
    << "grid:\n"
    << "  z1_min: " << fmt_double(c.grid.z1_min) << "\n"
    << "  z1_max: " << fmt_double(c.grid.z1_max) << "\n"
    << "  count: " << c.grid.count << "\n"
    << "quadrature:\n"
    << "  order: " << c.quad_order << "\n"
    << "  panels_per_unit: " << fmt_double(c.quad_panels_per_unit) << "\n"
    << "  tail_eps: " << fmt_double(c.quad_tail_eps) << "\n"
    << "controller:\n"
    << "  dt_init: " << fmt_double(c.controller.dt_init) << "\n"
    << "  safety: " << fmt_double(c.controller.safety) << "\n"
    << "  atol: " << fmt_double(c.controller.atol) << "\n"
    << "  rtol: " << fmt_double(c.controller.rtol) << "\n"
    << "  dt_min: " << fmt_double(c.controller.dt_min) << "\n"
    << "t_end: " << fmt_double(c.t_end) << "\n"
    << "output_dir: " << detail::quoted(c.output_dir) << "\n"
    << "checkpoint_interval: " << c.checkpoint_interval << "\n"
    << "seed: " << c.seed << "\n"
    << "workers: " << c.workers << "\n"
    << "lattice_per_line: " << c.lattice_per_line << "\n";
  return o.str();
}

inline std::string sha256_hex(const std::string& text) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), digest);
  std::ostringstream o;
  for (unsigned char ch : digest) o << std::hex << std::setw(2) << std::setfill('0') << int(ch);
  return o.str();
}

/// Identity of the numerical problem; the output directory and worker count
/// do not change results and are left out.
inline std::string config_hash(const RunConfig& c) {
  RunConfig k = c;
  k.output_dir = "";
  k.workers = 1;
  return sha256_hex(emit_canonical(k));
}

}  // namespace hsqg
