#pragma once

// Minimal SVG line plots for the diagnostics time series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypersqg/diagnostics.hpp"

namespace hsqg {

struct Series {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = true;
};

struct PlotSpec {
  std::string title;
  std::string xlabel = "t";
  std::string ylabel;
  bool log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  [[nodiscard]] bool empty() const { return !(hi >= lo); }
  void pad() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      const double d = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
      lo -= d;
      hi += d;
    }
  }
};

}  // namespace detail

inline std::string render_svg(const PlotSpec& spec) {
  using detail::num;
  constexpr double W = 640, H = 420, L = 80, R = 20, T = 40, B = 60;
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0.0);
  };
  detail::Range xr, yr;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!usable(s.xs[i], s.ys[i])) continue;
      xr.add(s.xs[i]);
      yr.add(ty(s.ys[i]));
    }
  }
  xr.pad();
  yr.pad();
  auto px = [&](double x) { return L + (x - xr.lo) / (xr.hi - xr.lo) * (W - L - R); };
  auto py = [&](double y) { return H - B - (ty(y) - yr.lo) / (yr.hi - yr.lo) * (H - T - B); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
       "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + num(W) + "\" height=\"" + num(H) + "\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       detail::xml_escape(spec.title) + "</text>\n";
  o += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) +
       "\" height=\"" + num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double X = px(fx);
    o += "<line x1=\"" + num(X) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(X) + "\" y2=\"" +
         num(H - B + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + num(X) + "\" y=\"" + num(H - B + 20) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + num(fx) + "</text>\n";
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double Y = H - B - (fy - yr.lo) / (yr.hi - yr.lo) * (H - T - B);
    o += "<line x1=\"" + num(L - 5) + "\" y1=\"" + num(Y) + "\" x2=\"" + num(L) + "\" y2=\"" +
         num(Y) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + num(L - 8) + "\" y=\"" + num(Y + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + num(spec.log_y ? std::pow(10.0, fy) : fy) +
         "</text>\n";
  }
  o += "<text x=\"" + num(L + (W - L - R) / 2) + "\" y=\"" + num(H - 15) +
       "\" text-anchor=\"middle\" font-size=\"13\">" + detail::xml_escape(spec.xlabel) +
       "</text>\n";
  o += "<text x=\"18\" y=\"" + num(T + (H - T - B) / 2) +
       "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
       num(T + (H - T - B) / 2) + ")\">" +
       detail::xml_escape(spec.ylabel + (spec.log_y ? " (log)" : "")) + "</text>\n";

  double legend_y = T + 16;
  for (const auto& s : spec.series) {
    std::string pts;
    std::string marks;
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!usable(s.xs[i], s.ys[i])) continue;
      const std::string X = num(px(s.xs[i]));
      const std::string Y = num(py(s.ys[i]));
      pts += X + "," + Y + " ";
      if (s.markers) {
        marks += "<circle cx=\"" + X + "\" cy=\"" + Y + "\" r=\"2\" fill=\"" + s.color + "\"/>\n";
      }
    }
    if (!pts.empty()) pts.pop_back();
    o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + pts + "\"/>\n";
    o += marks;
    o += "<text x=\"" + num(W - R - 8) + "\" y=\"" + num(legend_y) +
         "\" text-anchor=\"end\" font-size=\"11\" fill=\"" + s.color + "\">" +
         detail::xml_escape(s.name) + "</text>\n";
    legend_y += 14;
  }
  o += "</svg>\n";
  return o;
}

struct PlotOverlay {
  BlowupFit fit;
  double alpha = 0.5;
};

/// Z(t), W(t) with the fitted line and the slope envelope, and bkm(t) on a log axis.
inline std::vector<std::pair<std::string, std::string>> diagnostic_plots(
    const std::vector<DiagnosticsRecord>& records, const std::optional<PlotOverlay>& overlay) {
  std::vector<double> t, Z, Wv, bkm;
  for (const auto& r : records) {
    t.push_back(r.t);
    Z.push_back(r.Z);
    Wv.push_back(r.W);
    bkm.push_back(r.bkm);
  }
  PlotSpec pz{"Root tracker Z(t)", "t", "Z", false, {{"Z", t, Z}}};

  PlotSpec pw{"Blow-up indicator W = exp(alpha Z / 2)", "t", "W", false, {{"W", t, Wv}}};
  if (overlay) {
    const auto& f = overlay->fit;
    const double w0 = f.slope * (f.t0 - f.T_pred);
    pw.series.push_back({"least-squares fit", {f.t0, f.T_pred}, {w0, 0.0}, "#d62728", false, false});
    const double t_env = f.t0 - w0 / f.envelope_slope;
    pw.series.push_back(
        {"slope -(alpha/2) C_floor", {f.t0, t_env}, {w0, 0.0}, "#2ca02c", true, false});
  }

  PlotSpec pb{"Accumulated sup |grad w|", "t", "bkm", true, {{"bkm", t, bkm, "#9467bd"}}};
  return {{"Z.svg", render_svg(pz)}, {"W.svg", render_svg(pw)}, {"bkm.svg", render_svg(pb)}};
}

}  // namespace hsqg
