#pragma once

// Grid sweep of Omega~ for the reduced system. The y1-quadrature nodes, their
// interpolation stencils into the z1-grid, and the z2-nodes weighted by w~0
// depend only on the grid and the initial data, so they are tabulated once;
// each evaluation only recomputes the cosh kernel at the shifted nodes.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hypersqg/biot_savart.hpp"
#include "hypersqg/displacement.hpp"
#include "hypersqg/initial_data.hpp"
#include "hypersqg/quadrature.hpp"

namespace hsqg {

class ReducedModel {
 public:
  ReducedModel(const Z1Grid& grid, const BumpSpec& spec, const Alpha& alpha,
               const QuadratureRule& rule, int workers = 1)
      : grid_(grid), spec_(spec), alpha_(alpha), rule_(rule), workers_(workers) {
    if (workers < 1) throw DomainError("worker count must be >= 1");
    if (spec.is_zero()) return;
    const double top = spec.box().z1_top();
    if (grid.z1_max < top) {
      throw DomainError("ReducedModel: grid must extend above the support top");
    }
    const auto ybreaks = z1_breaks(spec);
    const double pref = alpha.z_prefactor();
    for (std::size_t c = 0; c + 1 < grid.count; ++c) {
      const double a = grid.node(c);
      const double b = std::min(grid.node(c + 1), top);
      if (!(b > a)) break;
      for (const auto& q : composite_nodes(a, b, rule, ybreaks)) {
        Outer o;
        o.y = q.x;
        o.decay = std::exp(-0.5 * alpha.value() * q.x);
        o.weight = pref * q.w;
        o.cell = c;
        o.stencil = grid.stencil(q.x);
        o.begin = s_.size();
        const Band band = z2_band(spec, q.x);
        if (!band.empty()) {
          for (const auto& r : composite_nodes(band.lo, band.hi, rule, z2_breaks(spec, q.x))) {
            const double w0 = eval_omega0_z(spec, {q.x, r.x});
            if (w0 == 0.0) continue;
            s_.push_back(r.x);
            ws_.push_back(r.w * w0);
          }
        }
        o.end = s_.size();
        outer_.push_back(o);
      }
    }
  }

  [[nodiscard]] const Z1Grid& grid() const { return grid_; }
  [[nodiscard]] const BumpSpec& spec() const { return spec_; }
  [[nodiscard]] const Alpha& alpha() const { return alpha_; }
  [[nodiscard]] const QuadratureRule& rule() const { return rule_; }
  [[nodiscard]] int workers() const { return workers_; }

  /// Omega~ at every grid node for the shift profile X.
  [[nodiscard]] std::vector<double> omega_tilde(std::span<const double> X) const {
    std::vector<double> out(grid_.count, 0.0);
    if (outer_.empty()) return out;
    if (X.size() != grid_.count) throw DomainError("omega_tilde: profile size mismatch");
    const double p = alpha_.kernel_power();
    std::vector<double> integrand(outer_.size());
    const auto n_outer = static_cast<std::ptrdiff_t>(outer_.size());
#pragma omp parallel for schedule(static) num_threads(workers_)
    for (std::ptrdiff_t k = 0; k < n_outer; ++k) {
      const Outer& o = outer_[static_cast<std::size_t>(k)];
      double shift = 0.0;
      for (std::size_t j = 0; j < 4; ++j) shift += o.stencil.w[j] * X[o.stencil.first + j];
      double inner = 0.0;
      for (std::size_t e = o.begin; e < o.end; ++e) {
        inner += ws_[e] * cosh_kernel(s_[e] - shift, p);
      }
      integrand[static_cast<std::size_t>(k)] = o.decay * inner;
    }
    std::vector<double> cell(grid_.count, 0.0);
    double running_max = 0.0;
    for (std::size_t k = outer_.size(); k-- > 0;) {
      const double g = integrand[k];
      running_max = std::max(running_max, g);
      if (g < rule_.tail_eps * running_max) continue;
      cell[outer_[k].cell] += outer_[k].weight * g;
    }
    double acc = 0.0;
    for (std::size_t i = grid_.count; i-- > 0;) {
      acc += cell[i];
      out[i] = acc;
    }
    return out;
  }

  /// Characteristic speed dX~/dt = 2 Omega~.
  [[nodiscard]] std::vector<double> operator()(std::span<const double> X) const {
    auto v = omega_tilde(X);
    for (double& x : v) x *= 2.0;
    return v;
  }

  [[nodiscard]] std::size_t table_size() const { return s_.size(); }

 private:
  struct Outer {
    double y = 0.0;
    double decay = 0.0;   // e^{-alpha y / 2}
    double weight = 0.0;  // prefactor * quadrature weight
    std::size_t cell = 0;
    Z1Grid::Stencil stencil{};
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  Z1Grid grid_;
  BumpSpec spec_;
  Alpha alpha_;
  QuadratureRule rule_;
  int workers_;
  std::vector<Outer> outer_;
  std::vector<double> s_;
  std::vector<double> ws_;
};

}  // namespace hsqg
