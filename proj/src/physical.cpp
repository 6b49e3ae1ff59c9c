#include "ymflow/physical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ymflow/tridiagonal.hpp"

namespace ymflow::evolve {

void PhysicalConfig::validate() const {
  if (!dim.has_profile()) throw std::invalid_argument("PhysicalConfig: needs b > 0");
  if (!(theta >= 0.5 && theta <= 1.0)) throw std::invalid_argument("PhysicalConfig: theta must lie in [1/2, 1]");
  if (!(cfl > 0.0) || !(dt_max > 0.0) || dt_max > 0.1) {
    throw std::invalid_argument("PhysicalConfig: need cfl > 0 and 0 < dt_max <= 0.1");
  }
  if (!(t_max > 0.0)) throw std::invalid_argument("PhysicalConfig: t_max must be positive");
  if (grid.size() < 4) throw std::invalid_argument("PhysicalConfig: grid needs at least 4 nodes");
  if (!(fit_fraction > 0.0 && fit_fraction < 1.0)) {
    throw std::invalid_argument("PhysicalConfig: fit_fraction must lie in (0, 1)");
  }
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired samples");
  const auto m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

double self_similar_data(const Dimension& dim, double r) {
  return eval_profile(ProfileKind::W, dim, r);
}

PhysicalResult run_physical(const std::function<double(double)>& u0, const PhysicalConfig& cfg) {
  cfg.validate();
  const RadialGrid& grid = cfg.grid;
  const std::size_t n_nodes = grid.size();
  const double h = grid.h();
  const double n = cfg.dim.n;
  const double dm2 = cfg.dim.d - 2.0;

  std::vector<double> r = grid.nodes();
  std::vector<double> lo(n_nodes);
  std::vector<double> up(n_nodes);
  std::vector<double> di(n_nodes, -2.0 / (h * h));
  for (std::size_t i = 0; i < n_nodes; ++i) {
    lo[i] = 1.0 / (h * h) - (n - 1.0) / (2.0 * h * r[i]);
    up[i] = 1.0 / (h * h) + (n - 1.0) / (2.0 * h * r[i]);
  }
  di[0] += 4.0 * lo[0] / 3.0;
  up[0] -= lo[0] / 3.0;
  const double u_outer = u0(grid.R());
  const double boundary_coupling = up[n_nodes - 1];

  std::vector<double> u(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) u[i] = u0(r[i]);

  auto reaction = [&](const std::vector<double>& v) {
    std::vector<double> out(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const double x = v[i];
      out[i] = 3.0 * dm2 * x * x - dm2 * r[i] * r[i] * x * x * x;
    }
    return out;
  };
  auto sup_of = [](const std::vector<double>& v) {
    return std::max(std::abs(origin_value(v)), sup_norm(v));
  };

  PhysicalResult out;
  const double w0 = 1.0 / cfg.dim.b;
  std::vector<double> f_prev;
  double dt_prev = 0.0;
  double t = 0.0;
  std::size_t step = 0;
  while (true) {
    const double sup = sup_of(u);
    out.t.push_back(t);
    out.sup.push_back(sup);
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) {
      out.snapshot_steps.push_back(step);
      out.snapshots.push_back(u);
    }
    if (!std::isfinite(sup)) {
      out.blowup = true;
      out.stop_reason = "nonFinite";
      break;
    }
    if (sup >= cfg.sup_limit) {
      out.blowup = true;
      out.stop_reason = "supLimit";
      break;
    }
    if (std::sqrt(w0 / sup) < cfg.resolution_cells * h) {
      out.blowup = true;
      out.stop_reason = "resolution";
      break;
    }
    if (t >= cfg.t_max) {
      out.stop_reason = "tMax";
      break;
    }
    const double dt = std::min({cfg.dt_max, cfg.cfl / sup, cfg.t_max - t});
    if (!(dt > 0.0) || t + dt == t) {
      out.blowup = true;
      out.stop_reason = "dtUnderflow";
      break;
    }

    const double c = cfg.theta * dt;
    linalg::Tridiagonal implicit;
    implicit.diag.resize(n_nodes);
    implicit.lower.resize(n_nodes - 1);
    implicit.upper.resize(n_nodes - 1);
    for (std::size_t i = 0; i < n_nodes; ++i) implicit.diag[i] = 1.0 - c * di[i];
    for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
      implicit.lower[i] = -c * lo[i + 1];
      implicit.upper[i] = -c * up[i];
    }
    const linalg::TridiagonalLU lu(std::move(implicit));

    const std::vector<double> f_now = reaction(u);
    std::vector<double> rhs(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      double lu_i = di[i] * u[i];
      if (i > 0) lu_i += lo[i] * u[i - 1];
      if (i + 1 < n_nodes) lu_i += up[i] * u[i + 1];
      double fe = f_now[i];
      if (!f_prev.empty()) {
        const double w = dt / (2.0 * dt_prev);
        fe = (1.0 + w) * f_now[i] - w * f_prev[i];
      }
      rhs[i] = u[i] + (1.0 - cfg.theta) * dt * lu_i + dt * fe;
    }
    rhs[n_nodes - 1] += dt * boundary_coupling * u_outer;
    lu.solve_in_place(rhs);
    u = std::move(rhs);
    f_prev = f_now;
    dt_prev = dt;
    out.dt.push_back(dt);
    t += dt;
    ++step;
  }
  out.t_last = t;
  out.u_last = u;

  if (out.blowup) {
    const double sup_end = out.sup.back();
    std::vector<double> ts;
    std::vector<double> inv;
    for (std::size_t i = 0; i < out.t.size(); ++i) {
      if (std::isfinite(out.sup[i]) && out.sup[i] >= sup_end * cfg.fit_fraction) {
        ts.push_back(out.t[i]);
        inv.push_back(1.0 / out.sup[i]);
      }
    }
    if (ts.size() >= 2) {
      const LinearFit fit = linear_fit(ts, inv);
      out.fit_slope = fit.slope;
      out.fit_r2 = fit.r2;
      out.fit_samples = ts.size();
      out.T_fit = -fit.intercept / fit.slope;
      const double tau = out.T_fit - out.t_last;
      if (tau > 0.0 && std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); })) {
        double worst = 0.0;
        const double sqrt_tau = std::sqrt(tau);
        for (int k = 0; k <= 1000; ++k) {
          const double rho = 10.0 * k / 1000.0;
          const double rescaled = tau * interpolate_radial(grid, u, sqrt_tau * rho);
          worst = std::max(worst, std::abs(rescaled - eval_profile(ProfileKind::W, cfg.dim, rho)));
        }
        out.profile_distance = worst / w0;
      } else {
        out.profile_distance = std::numeric_limits<double>::infinity();
      }
    } else {
      out.profile_distance = std::numeric_limits<double>::infinity();
    }
  } else {
    out.global_looking = out.stop_reason == "tMax" && out.sup.back() < out.sup.front();
  }
  return out;
}

PhysicalResult run_physical(const GridFunction& u0, const PhysicalConfig& cfg) {
  PhysicalConfig local = cfg;
  local.grid = u0.grid;
  local.dim = u0.dim;
  return run_physical([&u0](double r) { return interpolate_radial(u0.grid, u0.values, r); }, local);
}

ScalingResult scaling_check(const std::function<double(double)>& u0, double lambda,
                            const PhysicalConfig& cfg, std::size_t checkpoints) {
  if (!(lambda >= 0.5 && lambda <= 2.0)) throw std::invalid_argument("scaling_check: lambda must lie in [1/2, 2]");
  if (checkpoints == 0) throw std::invalid_argument("scaling_check: need at least one checkpoint");
  ScalingResult out;
  out.lambda = lambda;
  const double l2 = lambda * lambda;
  auto scaled = [&u0, lambda, l2](double r) { return l2 * u0(lambda * r); };

  PhysicalConfig base = cfg;
  base.snapshot_every = 0;
  const std::size_t steps = run_physical(u0, base).dt.size();
  base.snapshot_every = std::max<std::size_t>(1, steps / checkpoints);
  const PhysicalResult ref = run_physical(u0, base);

  PhysicalConfig compatible = base;
  compatible.grid = RadialGrid(cfg.grid.R() / lambda, cfg.grid.size());
  compatible.dt_max = cfg.dt_max / l2;
  compatible.t_max = cfg.t_max / l2;
  const PhysicalResult run = run_physical(scaled, compatible);

  const std::size_t common = std::min({ref.snapshots.size(), run.snapshots.size()});
  for (std::size_t k = 0; k < common; ++k) {
    const auto& a = ref.snapshots[k];
    const auto& b = run.snapshots[k];
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      diff = std::max(diff, std::abs(b[i] - l2 * a[i]));
      scale = std::max(scale, std::abs(l2 * a[i]));
    }
    out.max_relative_diff = std::max(out.max_relative_diff, diff / scale);
  }
  out.checkpoints = common;

  // Compatible grids need no interpolation; what remains is node rounding.
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    const double mis = std::abs(lambda * compatible.grid.rho(i) - cfg.grid.rho(i)) / cfg.grid.h();
    out.grid_misalignment = std::max(out.grid_misalignment, mis);
  }

  out.T_fit = ref.T_fit;
  out.T_fit_scaled = run.T_fit;
  if (ref.blowup && run.blowup && ref.T_fit > 0.0) {
    out.T_ratio_error = run.T_fit * l2 / ref.T_fit - 1.0;
  }
  return out;
}

}  // namespace ymflow::evolve
