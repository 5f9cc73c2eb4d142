#pragma once

// Flat-file formats: the diagnostics CSV and the text checkpoint. Checkpoint
// doubles are hex floats so a resumed run continues from bit-identical state.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hypersqg/config.hpp"
#include "hypersqg/diagnostics.hpp"
#include "hypersqg/displacement.hpp"
#include "hypersqg/errors.hpp"

namespace hsqg {

inline constexpr const char* kCsvHeader = "t,Z,W,bkm,sup_grad,sup_omega_big,support_max_x1";
inline constexpr const char* kCheckpointMagic = "hypersqg-checkpoint";
inline constexpr int kCheckpointVersion = 1;

namespace fs = std::filesystem;

/// Atomic replace: write a sibling temporary, then rename over the target.
inline void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out << content;
    if (!out.flush()) throw IoError(tmp.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(path.string() + ": " + ec.message());
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string records_to_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.Z, r.W,
                  r.bkm, r.sup_grad, r.sup_omega_big, r.support_max_x1);
    out += buf;
  }
  return out;
}

inline std::vector<DiagnosticsRecord> records_from_csv(const std::string& text,
                                                       const std::string& origin = "csv") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError(origin + ": line 1: expected header '" + kCsvHeader + "'");
  }
  std::vector<DiagnosticsRecord> records;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    std::vector<double> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw IoError(origin + ": line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      f.push_back(v);
    }
    if (f.size() != 7) {
      throw IoError(origin + ": line " + std::to_string(lineno) + ": expected 7 fields");
    }
    records.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6]});
  }
  return records;
}

struct Checkpoint {
  std::string config_text;  // canonical emission
  std::string config_hash;
  long long step = 0;
  double dt_next = 0.0;
  DisplacementProfile disp;
  std::vector<DiagnosticsRecord> records;
};

namespace detail {

inline std::string hexf(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

inline double parse_hexf(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline std::string checkpoint_to_string(const Checkpoint& c) {
  using detail::hexf;
  std::ostringstream o;
  std::istringstream cfg(c.config_text);
  std::vector<std::string> cfg_lines;
  for (std::string l; std::getline(cfg, l);) cfg_lines.push_back(l);
  o << kCheckpointMagic << " " << kCheckpointVersion << "\n"
    << "config_hash " << c.config_hash << "\n"
    << "config " << cfg_lines.size() << "\n";
  for (const auto& l : cfg_lines) o << l << "\n";
  o << "step " << c.step << "\n"
    << "t " << hexf(c.disp.t) << "\n"
    << "dt_next " << hexf(c.dt_next) << "\n"
    << "values " << c.disp.values.size() << "\n";
  for (double v : c.disp.values) o << hexf(v) << "\n";
  o << "records " << c.records.size() << "\n";
  for (const auto& r : c.records) {
    o << hexf(r.t) << " " << hexf(r.Z) << " " << hexf(r.W) << " " << hexf(r.bkm) << " "
      << hexf(r.sup_grad) << " " << hexf(r.sup_omega_big) << " " << hexf(r.support_max_x1)
      << "\n";
  }
  o << "end\n";
  return o.str();
}

inline Checkpoint checkpoint_from_string(const std::string& text,
                                         const std::string& origin = "checkpoint") {
  std::istringstream in(text);
  int lineno = 0;
  auto where = [&] { return origin + ": line " + std::to_string(lineno); };
  auto next = [&]() {
    std::string l;
    if (!std::getline(in, l)) throw IoError(origin + ": truncated after line " + std::to_string(lineno));
    ++lineno;
    return l;
  };
  auto keyed = [&](const std::string& key) {
    const std::string l = next();
    if (l.rfind(key + " ", 0) != 0) throw IoError(where() + ": expected '" + key + "'");
    return l.substr(key.size() + 1);
  };
  auto count = [&](const std::string& key) {
    const std::string v = keyed(key);
    try {
      return std::stoll(v);
    } catch (const std::exception&) {
      throw IoError(where() + ": bad count '" + v + "'");
    }
  };

  const std::string magic = std::string(kCheckpointMagic) + " " + std::to_string(kCheckpointVersion);
  if (next() != magic) throw IoError(where() + ": not a version " +
                                     std::to_string(kCheckpointVersion) + " checkpoint");
  Checkpoint c;
  c.config_hash = keyed("config_hash");
  const long long ncfg = count("config");
  for (long long i = 0; i < ncfg; ++i) c.config_text += next() + "\n";
  c.step = count("step");
  const double t = detail::parse_hexf(keyed("t"), where());
  c.dt_next = detail::parse_hexf(keyed("dt_next"), where());
  const long long nv = count("values");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) values.push_back(detail::parse_hexf(next(), where()));
  const long long nr = count("records");
  for (long long i = 0; i < nr; ++i) {
    std::istringstream ss(next());
    double f[7];
    for (double& x : f) {
      std::string tok;
      if (!(ss >> tok)) throw IoError(where() + ": expected 7 fields");
      x = detail::parse_hexf(tok, where());
    }
    c.records.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6]});
  }
  if (next() != "end") throw IoError(where() + ": expected 'end'");

  const RunConfig cfg = parse_config(c.config_text);
  if (config_hash(cfg) != c.config_hash) {
    throw IoError(origin + ": embedded config does not match its hash");
  }
  try {
    c.disp = DisplacementProfile(cfg.grid, std::move(values), t);
  } catch (const DomainError& e) {
    throw IoError(origin + ": " + e.what());
  }
  return c;
}

}  // namespace hsqg
