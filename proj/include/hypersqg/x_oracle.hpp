#pragma once

// Independent check of the z-reduction: the flow map dX/dt = u(X) evolved in
// x-coordinates on a K x K Lagrangian lattice over the support box. Omega is a
// midpoint sum over lattice cells; incompressibility keeps the cell areas
// fixed, so no remeshing is needed. Shares no quadrature code with evolve_z.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hypersqg/displacement.hpp"
#include "hypersqg/errors.hpp"
#include "hypersqg/geometry.hpp"
#include "hypersqg/initial_data.hpp"

namespace hsqg {

struct ParticleCloud {
  int K = 0;
  double cell_area = 0.0;
  std::vector<PointX> initial;
  std::vector<PointX> current;
  std::vector<double> carried;  // w0 at the label, constant in time
  double t = 0.0;
};

inline ParticleCloud make_cloud(const BumpSpec& spec, int K) {
  if (K < 1) throw DomainError("particle lattice needs K >= 1");
  const SupportBox box = spec.box();
  ParticleCloud c;
  c.K = K;
  const double d1 = (box.N - box.n) / K;
  const double d2 = box.M / K;
  c.cell_area = d1 * d2;
  c.initial.reserve(static_cast<std::size_t>(K) * K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const PointX p{box.n + (i + 0.5) * d1, (j + 0.5) * d2};
      c.initial.push_back(p);
      c.carried.push_back(eval_omega0_x(spec, p));
    }
  }
  c.current = c.initial;
  return c;
}

/// Omega(a) for every a from one sorted table of particle products.
class OmegaTable {
 public:
  OmegaTable(const std::vector<PointX>& pos, const std::vector<double>& carried,
             double cell_area, double alpha) {
    const std::size_t n = pos.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = pos[i].x1 * pos[i].x2;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return prod[a] < prod[b]; });
    products_.resize(n);
    suffix_.assign(n + 1, 0.0);
    const double p = 1.0 + 0.5 * alpha;
    for (std::size_t k = 0; k < n; ++k) products_[k] = prod[order[k]];
    for (std::size_t k = n; k-- > 0;) {
      const PointX& x = pos[order[k]];
      const double w = carried[order[k]];
      const double term =
          w == 0.0 ? 0.0 : w * cell_area * std::pow(x.x1 * x.x1 + x.x2 * x.x2, -p);
      suffix_[k] = suffix_[k + 1] + term;
    }
  }

  /// Sum over particles with product >= a.
  [[nodiscard]] double operator()(double a) const {
    const auto it = std::lower_bound(products_.begin(), products_.end(), a);
    return suffix_[static_cast<std::size_t>(it - products_.begin())];
  }

 private:
  std::vector<double> products_;
  std::vector<double> suffix_;
};

inline double oracle_omega(double a, const ParticleCloud& cloud, double alpha) {
  const double p = 1.0 + 0.5 * alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < cloud.current.size(); ++i) {
    const PointX& x = cloud.current[i];
    if (cloud.carried[i] == 0.0 || x.x1 * x.x2 < a) continue;
    sum += cloud.carried[i] * cloud.cell_area * std::pow(x.x1 * x.x1 + x.x2 * x.x2, -p);
  }
  return sum;
}

namespace detail {

inline std::vector<PointX> oracle_velocity(const std::vector<PointX>& pos,
                                           const ParticleCloud& cloud, double alpha) {
  const OmegaTable table(pos, cloud.carried, cloud.cell_area, alpha);
  std::vector<PointX> v(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double om = table(pos[i].x1 * pos[i].x2);
    v[i] = {-pos[i].x1 * om, pos[i].x2 * om};
  }
  return v;
}

}  // namespace detail

/// Relative drift of x1 x2 from its initial value, maximized over particles.
inline double max_product_drift(const ParticleCloud& cloud) {
  double drift = 0.0;
  for (std::size_t i = 0; i < cloud.current.size(); ++i) {
    const double a0 = cloud.initial[i].x1 * cloud.initial[i].x2;
    const double a = cloud.current[i].x1 * cloud.current[i].x2;
    drift = std::max(drift, std::abs(a - a0) / a0);
  }
  return drift;
}

/// RK4 step of every particle under u = (-x1 Omega, x2 Omega).
inline ParticleCloud oracle_step(const ParticleCloud& cloud, double dt, double alpha) {
  if (!(dt > 0.0)) throw DomainError("oracle_step: dt must be positive");
  const auto& x = cloud.current;
  const std::size_t n = x.size();
  auto shifted = [&](const std::vector<PointX>& k, double h) {
    std::vector<PointX> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = {x[i].x1 + h * k[i].x1, x[i].x2 + h * k[i].x2};
    return y;
  };
  const auto k1 = detail::oracle_velocity(x, cloud, alpha);
  const auto k2 = detail::oracle_velocity(shifted(k1, 0.5 * dt), cloud, alpha);
  const auto k3 = detail::oracle_velocity(shifted(k2, 0.5 * dt), cloud, alpha);
  const auto k4 = detail::oracle_velocity(shifted(k3, dt), cloud, alpha);
  ParticleCloud next = cloud;
  for (std::size_t i = 0; i < n; ++i) {
    next.current[i].x1 += dt / 6.0 * (k1[i].x1 + 2.0 * k2[i].x1 + 2.0 * k3[i].x1 + k4[i].x1);
    next.current[i].x2 += dt / 6.0 * (k1[i].x2 + 2.0 * k2[i].x2 + 2.0 * k3[i].x2 + k4[i].x2);
  }
  next.t = cloud.t + dt;
  const double drift = max_product_drift(next);
  if (drift > 1e-6) {
    throw SolverError("oracle_step: particle product drifted by " + std::to_string(drift));
  }
  return next;
}

/// max over particles of |(z2_initial - z2_now) - X~(z1_now)|: the z2-shift
/// each particle accumulated against the reduced profile at its z1.
inline double compare_with_z(const ParticleCloud& cloud, const DisplacementProfile& disp) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.current.size(); ++i) {
    const PointZ z0 = x_to_z(cloud.initial[i]);
    const PointZ z = x_to_z(cloud.current[i]);
    if (z.z1 < disp.grid.z1_min || z.z1 > disp.grid.z1_max) {
      throw DomainError("compare_with_z: particle z1 outside the displacement grid");
    }
    worst = std::max(worst, std::abs((z0.z2 - z.z2) - disp.at(z.z1)));
  }
  return worst;
}

}  // namespace hsqg
