#pragma once

// The radial flow in physical variables
//
//   u_t = u_rr + (d+1)/r u_r + 3(d-2) u^2 - (d-2) r^2 u^3
//
// with Crank-Nicolson diffusion, Adams-Bashforth reaction and a step size
// dt = min(dt_max, cfl / sup|u|), which is covariant under the scaling
// u -> lambda^2 u(lambda r, lambda^2 t).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ymflow/model.hpp"

namespace ymflow::evolve {

struct PhysicalConfig {
  Dimension dim;
  RadialGrid grid{5.0, 8000};
  double theta = 0.5;
  double cfl = 1e-3;
  double dt_max = 1e-2;
  double t_max = 10.0;
  /// Stop once the blowup length sqrt(W(0)/sup u) drops below this many cells.
  double resolution_cells = 10.0;
  double sup_limit = 1e8;
  /// Blowup-time fit uses samples with sup u >= sup_end * fit_fraction.
  double fit_fraction = 1.0 / 16.0;
  /// Store the full state every this many steps (0 disables snapshots).
  std::size_t snapshot_every = 0;

  void validate() const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct PhysicalResult {
  std::vector<double> t;
  /// sup |u| (attained at the origin for the profiles of interest).
  std::vector<double> sup;
  std::vector<double> dt;
  bool blowup = false;
  /// Reached t_max with sup u small and decreasing.
  bool global_looking = false;
  std::string stop_reason;
  double T_fit = 0.0;
  double fit_r2 = 0.0;
  double fit_slope = 0.0;
  std::size_t fit_samples = 0;
  /// sup over rho in [0, 10] of |tau u(sqrt(tau) rho) - W(rho)| / W(0), tau = T_fit - t_last.
  double profile_distance = 0.0;
  double t_last = 0.0;
  std::vector<double> u_last;
  std::vector<std::size_t> snapshot_steps;
  std::vector<std::vector<double>> snapshots;
};

/// Dirichlet data u(R) = u0(R) is held fixed.
PhysicalResult run_physical(const std::function<double(double)>& u0, const PhysicalConfig& cfg);
PhysicalResult run_physical(const GridFunction& u0, const PhysicalConfig& cfg);

/// u_1(r, 0) = 1/(a r^2 + b), the self-similar solution with T = 1.
double self_similar_data(const Dimension& dim, double r);

struct ScalingResult {
  double lambda = 1.0;
  /// max over checkpoints of |u_lambda - lambda^2 u(lambda ., lambda^2 t)|_sup / |u|_sup on
  /// the compatible grid (R/lambda, same N, steps scaled by lambda^-2).
  double max_relative_diff = 0.0;
  /// max_i |lambda r_i' - r_i| / h between the two grids, in cells.
  double grid_misalignment = 0.0;
  std::size_t checkpoints = 0;
  double T_fit = 0.0;
  double T_fit_scaled = 0.0;
  /// T_fit_scaled * lambda^2 / T_fit - 1.
  double T_ratio_error = 0.0;
};

/// Requires lambda in [1/2, 2].
ScalingResult scaling_check(const std::function<double(double)>& u0, double lambda,
                            const PhysicalConfig& cfg, std::size_t checkpoints = 20);

}  // namespace ymflow::evolve
