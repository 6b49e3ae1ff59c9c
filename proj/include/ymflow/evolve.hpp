#pragma once

// Time stepping in similarity coordinates
//
//   psi_tau = psi'' + (d+1)/rho psi' - rho psi'/2 - psi + 3(d-2) psi^2 - (d-2) rho^2 psi^3
//
// written for the perturbation Phi = psi - W, so W is an exact discrete fixed
// point. Diffusion, drift and potential are implicit (theta scheme); the
// nonlinearity is explicit (two-step Adams-Bashforth after an Euler start).

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ymflow/model.hpp"
#include "ymflow/tridiagonal.hpp"

namespace ymflow::evolve {

enum class OuterBC { dirichletZero, extrapolated };

enum class Model {
  full,        ///< Phi_tau = (L0 + V) Phi + N(Phi)
  linearized,  ///< Phi_tau = (L0 + V) Phi
  free,        ///< f_tau = L0 f
};

std::string_view to_string(Model model);
std::string_view to_string(OuterBC bc);

struct SolverConfig {
  Dimension dim;
  RadialGrid grid{20.0, 2000};
  double dt = 1e-2;
  double theta = 0.5;
  double tau_max = 10.0;
  OuterBC bc = OuterBC::dirichletZero;
  Model model = Model::full;
  /// Trace samples are taken every this many units of tau (rounded to steps).
  double sample_interval = 0.1;
  /// sup |psi| beyond which a run is stopped and flagged.
  double divergence_limit = 1e6;

  /// Throws std::invalid_argument unless 0 < dt <= 0.1 and theta in [1/2, 1].
  void validate() const;
  /// Stable identifier of every field that affects results.
  [[nodiscard]] std::string hash() const;
};

struct EvolutionTrace {
  std::vector<double> tau;
  std::vector<double> sup;
  std::vector<double> sigma;
  std::vector<double> x_proxy;
  std::vector<double> c1;
  std::string config_hash;
  bool blowup = false;
  /// Unknown (Phi, or f for the free model) at the end of the run.
  std::vector<double> final_state;

  [[nodiscard]] std::size_t size() const noexcept { return tau.size(); }
};

/// Reusable stepper; keeps the factorized implicit matrix and the previous
/// nonlinear term.
class SimilarityStepper {
 public:
  explicit SimilarityStepper(SolverConfig cfg);

  /// Advances the unknown by one step in place.
  void step(std::vector<double>& phi);
  /// Forgets the multistep history (next step is an Euler start).
  void reset() noexcept { has_previous_ = false; }
  [[nodiscard]] const SolverConfig& config() const noexcept { return cfg_; }

  /// Applies the implicit operator (L0 + V, or L0 for the free model).
  [[nodiscard]] std::vector<double> apply_linear(std::span<const double> phi) const;

 private:
  SolverConfig cfg_;
  std::vector<double> lower_;
  std::vector<double> diag_;
  std::vector<double> upper_;
  std::vector<double> rho_;
  std::vector<double> w_;
  linalg::TridiagonalLU lu_;
  std::vector<double> previous_n_;
  bool has_previous_ = false;
};

/// One step with an Euler nonlinearity. For the full model the argument and
/// result are psi; for linearized and free they are the unknown itself.
GridFunction step_similarity(const GridFunction& state, const SolverConfig& cfg);

/// Free evolution of e^{-beta |x|^2} on R^n at radius rho.
double ou_oracle(const Dimension& dim, double beta, double tau, double rho);

/// (phi | gMode)_sigma / (gMode | gMode)_sigma on the grid.
double project_unstable(const GridFunction& phi);

/// Evolves from psi(rho, 0) = T W(sqrt(T) rho) + T v(sqrt(T) rho) with v
/// sampled on the grid and interpolated.
EvolutionTrace run_similarity(const GridFunction& v, double T, const SolverConfig& cfg);
EvolutionTrace run_similarity(const std::function<double(double)>& v, double T,
                              const SolverConfig& cfg);

/// Evolves a given initial unknown without rescaling.
EvolutionTrace run_from(std::vector<double> phi0, const SolverConfig& cfg);

enum class ShootVerdict { converged, maxIter, lostBracket };
std::string_view to_string(ShootVerdict verdict);

struct ShootOptions {
  double c1_tol = 1e-6;
  double width_tol = 1e-12;
  int max_iter = 60;
  /// Bound on |c1| over the final trace required for convergence.
  double c1_bound = 1e-3;
};

struct ShootResult {
  double T = 1.0;
  std::vector<std::pair<double, double>> bracket_history;
  int iterations = 0;
  EvolutionTrace final_trace;
  ShootVerdict verdict = ShootVerdict::maxIter;
};

/// Bisection on T in [1 - delta, 1 + delta] on the sign of c1 at tau_max.
ShootResult shoot_T(const GridFunction& v, double delta, const SolverConfig& cfg,
                    const ShootOptions& options = {});

struct DecayFit {
  double omega = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log(sigma) against tau on [lo, hi]; omega is minus
/// the slope. Throws std::invalid_argument with fewer than 10 samples.
DecayFit fit_decay_rate(const EvolutionTrace& trace, double lo, double hi);

}  // namespace ymflow::evolve
