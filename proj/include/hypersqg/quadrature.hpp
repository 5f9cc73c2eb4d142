#pragma once

// Panelized composite Gauss-Legendre rules. Every 1D leg of the kernel
// integrals goes through here; 2D integrals are iterated 1D rules.

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "hypersqg/errors.hpp"

namespace hsqg {

/// Nodes and weights of the g-point Gauss-Legendre rule on [-1, 1].
struct GaussTable {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussTable(int order) {
    if (order < 1) throw DomainError("Gauss-Legendre order must be >= 1");
    // boost returns the nonnegative zeros in ascending order
    const auto zeros = boost::math::legendre_p_zeros<double>(order);
    std::vector<double> x;
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
      if (*it != 0.0) x.push_back(-*it);
    }
    for (double z : zeros) x.push_back(z);
    for (double xi : x) {
      const double dp = boost::math::legendre_p_prime(order, xi);
      nodes.push_back(xi);
      weights.push_back(2.0 / ((1.0 - xi * xi) * dp * dp));
    }
  }
};

struct QuadratureRule {
  int order = 8;
  double panels_per_unit = 8.0;
  double tail_eps = 1e-14;

  QuadratureRule() : table_(std::make_shared<GaussTable>(8)) {}
  QuadratureRule(int order_, double panels_per_unit_, double tail_eps_ = 1e-14)
      : order(order_),
        panels_per_unit(panels_per_unit_),
        tail_eps(tail_eps_) {
    if (!(panels_per_unit_ > 0.0)) {
      throw DomainError("panels_per_unit must be positive");
    }
    if (!(tail_eps_ >= 0.0 && tail_eps_ < 1.0)) {
      throw DomainError("tail_eps must lie in [0, 1)");
    }
    table_ = std::make_shared<GaussTable>(order_);
  }

  [[nodiscard]] const GaussTable& table() const { return *table_; }

  /// Same order, twice the panel density.
  [[nodiscard]] QuadratureRule refined() const {
    return {order, 2.0 * panels_per_unit, tail_eps};
  }

  [[nodiscard]] int panels_on(double length) const {
    return std::max(1, static_cast<int>(std::ceil(length * panels_per_unit - 1e-9)));
  }

  friend bool operator==(const QuadratureRule& a, const QuadratureRule& b) {
    return a.order == b.order && a.panels_per_unit == b.panels_per_unit &&
           a.tail_eps == b.tail_eps;
  }

 private:
  std::shared_ptr<const GaussTable> table_;
};

struct QuadNode {
  double x;
  double w;
};

/// Sorted segment endpoints of [a, b] split at the interior breakpoints.
inline std::vector<double> split_points(double a, double b,
                                        std::span<const double> breaks) {
  std::vector<double> pts{a};
  for (double c : breaks) {
    if (c > a && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Appends the composite-rule nodes of one segment [a, b].
inline void append_segment(std::vector<QuadNode>& out, double a, double b,
                           const QuadratureRule& rule) {
  if (!(b > a)) return;
  const auto& t = rule.table();
  const int panels = rule.panels_on(b - a);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < t.nodes.size(); ++k) {
      out.push_back({mid + half * t.nodes[k], half * t.weights[k]});
    }
  }
}

inline std::vector<QuadNode> composite_nodes(double a, double b,
                                             const QuadratureRule& rule,
                                             std::span<const double> breaks = {}) {
  std::vector<QuadNode> out;
  if (!(b > a)) return out;
  const auto pts = split_points(a, b, breaks);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    append_segment(out, pts[i], pts[i + 1], rule);
  }
  return out;
}

template <typename F>
double integrate(F&& f, double a, double b, const QuadratureRule& rule,
                 std::span<const double> breaks = {}) {
  double sum = 0.0;
  for (const auto& q : composite_nodes(a, b, rule, breaks)) sum += q.w * f(q.x);
  return sum;
}

/// Integrates at the rule and at its refinement; throws QuadratureError when
/// the two disagree by more than rel_tol relative to the integral of |f|.
template <typename F>
double integrate_checked(F&& f, double a, double b, const QuadratureRule& rule,
                         std::span<const double> breaks = {},
                         double rel_tol = 1e-9, const char* what = "integral") {
  double coarse = 0.0;
  for (const auto& q : composite_nodes(a, b, rule, breaks)) coarse += q.w * f(q.x);
  double fine = 0.0;
  double fine_abs = 0.0;
  for (const auto& q : composite_nodes(a, b, rule.refined(), breaks)) {
    const double v = f(q.x);
    fine += q.w * v;
    fine_abs += q.w * std::abs(v);
  }
  if (std::abs(fine - coarse) > rel_tol * fine_abs) {
    throw QuadratureError(std::string(what) + ": refinement changed result from " +
                          std::to_string(coarse) + " to " + std::to_string(fine));
  }
  return fine;
}

}  // namespace hsqg
