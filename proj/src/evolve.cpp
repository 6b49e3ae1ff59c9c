#include "ymflow/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ymflow/physical.hpp"

namespace ymflow::evolve {
namespace {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> sampled_gmode(const RadialGrid& grid, const Dimension& dim) {
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = eval_profile(ProfileKind::gMode, dim, grid.rho(i));
  return g;
}

bool diverged(std::span<const double> phi, double limit) {
  for (double v : phi) {
    if (!std::isfinite(v) || std::abs(v) > limit) return true;
  }
  return false;
}

void record(EvolutionTrace& trace, const SolverConfig& cfg, double tau,
            const std::vector<double>& phi) {
  const GridFunction f(cfg.grid, cfg.dim, phi);
  trace.tau.push_back(tau);
  trace.sup.push_back(sup_norm(phi));
  trace.sigma.push_back(std::sqrt(sigma_inner(cfg.grid, cfg.dim.n, phi, phi)));
  trace.x_proxy.push_back(x_proxy_norm(f));
  trace.c1.push_back(project_unstable(f));
}

}  // namespace

std::string_view to_string(Model model) {
  switch (model) {
    case Model::full: return "full";
    case Model::linearized: return "linearized";
    case Model::free: return "free";
  }
  return "unknown";
}

std::string_view to_string(OuterBC bc) {
  return bc == OuterBC::dirichletZero ? "dirichletZero" : "extrapolated";
}

std::string_view to_string(ShootVerdict verdict) {
  switch (verdict) {
    case ShootVerdict::converged: return "converged";
    case ShootVerdict::maxIter: return "maxIter";
    case ShootVerdict::lostBracket: return "lostBracket";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.1) throw std::invalid_argument("SolverConfig: need 0 < dt <= 0.1");
  if (!(theta >= 0.5 && theta <= 1.0)) throw std::invalid_argument("SolverConfig: theta must lie in [1/2, 1]");
  if (!(tau_max >= 0.0)) throw std::invalid_argument("SolverConfig: tau_max must be non-negative");
  if (!(sample_interval > 0.0)) throw std::invalid_argument("SolverConfig: sample_interval must be positive");
  if (grid.size() < 4) throw std::invalid_argument("SolverConfig: grid needs at least 4 nodes");
  if (model != Model::free && !dim.has_profile()) {
    throw std::invalid_argument("SolverConfig: the W-based models need b > 0");
  }
}

std::string SolverConfig::hash() const {
  std::ostringstream out;
  out.precision(17);
  out << dim.d << '|' << grid.R() << '|' << grid.size() << '|' << dt << '|' << theta << '|'
      << tau_max << '|' << to_string(bc) << '|' << to_string(model) << '|' << sample_interval
      << '|' << divergence_limit;
  return fnv1a_hex(out.str());
}

SimilarityStepper::SimilarityStepper(SolverConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const std::size_t n_nodes = cfg_.grid.size();
  const double h = cfg_.grid.h();
  const double n = cfg_.dim.n;
  rho_ = cfg_.grid.nodes();
  w_.assign(n_nodes, 0.0);
  std::vector<double> lo(n_nodes);
  std::vector<double> up(n_nodes);
  diag_.assign(n_nodes, 0.0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double r = rho_[i];
    lo[i] = 1.0 / (h * h) - (n - 1.0) / (2.0 * h * r) + r / (4.0 * h);
    up[i] = 1.0 / (h * h) + (n - 1.0) / (2.0 * h * r) - r / (4.0 * h);
    diag_[i] = -2.0 / (h * h) - 1.0;
    if (cfg_.model != Model::free) {
      w_[i] = eval_profile(ProfileKind::W, cfg_.dim, r);
      diag_[i] += eval_profile(ProfileKind::V, cfg_.dim, r);
    }
  }
  // Even extension at the origin: f(0) = (4 f_1 - f_2)/3.
  diag_[0] += 4.0 * lo[0] / 3.0;
  up[0] -= lo[0] / 3.0;
  const std::size_t last = n_nodes - 1;
  if (cfg_.bc == OuterBC::extrapolated) {
    diag_[last] += 2.0 * up[last];
    lo[last] -= up[last];
  }
  lower_.assign(lo.begin() + 1, lo.end());
  upper_.assign(up.begin(), up.end() - 1);

  const double c = cfg_.theta * cfg_.dt;
  linalg::Tridiagonal implicit;
  implicit.lower.resize(n_nodes - 1);
  implicit.upper.resize(n_nodes - 1);
  implicit.diag.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) implicit.diag[i] = 1.0 - c * diag_[i];
  for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
    implicit.lower[i] = -c * lower_[i];
    implicit.upper[i] = -c * upper_[i];
  }
  lu_ = linalg::TridiagonalLU(std::move(implicit));
}

std::vector<double> SimilarityStepper::apply_linear(std::span<const double> phi) const {
  const std::size_t n_nodes = diag_.size();
  std::vector<double> out(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    double v = diag_[i] * phi[i];
    if (i > 0) v += lower_[i - 1] * phi[i - 1];
    if (i + 1 < n_nodes) v += upper_[i] * phi[i + 1];
    out[i] = v;
  }
  return out;
}

void SimilarityStepper::step(std::vector<double>& phi) {
  const std::size_t n_nodes = diag_.size();
  if (phi.size() != n_nodes) throw std::invalid_argument("SimilarityStepper: state length mismatch");
  const double dt = cfg_.dt;
  std::vector<double> rhs = apply_linear(phi);
  for (std::size_t i = 0; i < n_nodes; ++i) rhs[i] = phi[i] + (1.0 - cfg_.theta) * dt * rhs[i];

  if (cfg_.model == Model::full) {
    const double dm2 = cfg_.dim.d - 2.0;
    std::vector<double> current(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const double r2 = rho_[i] * rho_[i];
      const double f = phi[i];
      current[i] = 3.0 * dm2 * (1.0 - r2 * w_[i]) * f * f - dm2 * r2 * f * f * f;
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const double ne = has_previous_ ? 1.5 * current[i] - 0.5 * previous_n_[i] : current[i];
      rhs[i] += dt * ne;
    }
    previous_n_ = std::move(current);
    has_previous_ = true;
  }
  lu_.solve_in_place(rhs);
  phi = std::move(rhs);
}

GridFunction step_similarity(const GridFunction& state, const SolverConfig& cfg) {
  SolverConfig local = cfg;
  local.grid = state.grid;
  local.dim = state.dim;
  SimilarityStepper stepper(local);
  std::vector<double> phi = state.values;
  if (cfg.model == Model::full) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      phi[i] -= eval_profile(ProfileKind::W, state.dim, state.rho(i));
    }
  }
  stepper.step(phi);
  if (diverged(phi, cfg.divergence_limit)) {
    throw std::runtime_error("step_similarity: divergence detected");
  }
  if (cfg.model == Model::full) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      phi[i] += eval_profile(ProfileKind::W, state.dim, state.rho(i));
    }
  }
  return {state.grid, state.dim, std::move(phi)};
}

double ou_oracle(const Dimension& dim, double beta, double tau, double rho) {
  if (!(beta > 0.0)) throw std::invalid_argument("ou_oracle: beta must be positive");
  const double decay = std::exp(-tau);
  const double spread = 1.0 + 4.0 * (1.0 - decay) * beta;
  return decay * std::pow(spread, -0.5 * dim.n) * std::exp(-beta * decay * rho * rho / spread);
}

double project_unstable(const GridFunction& phi) {
  const auto g = sampled_gmode(phi.grid, phi.dim);
  return sigma_inner(phi.grid, phi.dim.n, phi.values, g) / sigma_inner(phi.grid, phi.dim.n, g, g);
}

EvolutionTrace run_from(std::vector<double> phi, const SolverConfig& cfg) {
  SimilarityStepper stepper(cfg);
  if (phi.size() != cfg.grid.size()) throw std::invalid_argument("run_from: state length mismatch");
  EvolutionTrace trace;
  trace.config_hash = cfg.hash();
  const auto steps = static_cast<long long>(std::llround(cfg.tau_max / cfg.dt));
  const long long every = std::max(1LL, static_cast<long long>(std::llround(cfg.sample_interval / cfg.dt)));
  record(trace, cfg, 0.0, phi);
  std::vector<double> previous;
  for (long long k = 1; k <= steps; ++k) {
    previous = phi;
    stepper.step(phi);
    const double tau = static_cast<double>(k) * cfg.dt;
    if (diverged(phi, cfg.divergence_limit)) {
      trace.blowup = true;
      const bool finite = std::all_of(phi.begin(), phi.end(), [](double v) { return std::isfinite(v); });
      if (finite) {
        record(trace, cfg, tau, phi);
      } else {
        record(trace, cfg, tau - cfg.dt, previous);
        phi = std::move(previous);
      }
      break;
    }
    if (k % every == 0 || k == steps) record(trace, cfg, tau, phi);
  }
  trace.final_state = std::move(phi);
  return trace;
}

EvolutionTrace run_similarity(const std::function<double(double)>& v, double T,
                              const SolverConfig& cfg) {
  if (!(T > 0.0)) throw std::invalid_argument("run_similarity: T must be positive");
  cfg.validate();
  const double sqrt_t = std::sqrt(T);
  std::vector<double> phi(cfg.grid.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = cfg.grid.rho(i);
    const double y = sqrt_t * r;
    double value = T * v(y);
    if (cfg.model != Model::free) {
      value += T * eval_profile(ProfileKind::W, cfg.dim, y) - eval_profile(ProfileKind::W, cfg.dim, r);
    }
    phi[i] = value;
  }
  return run_from(std::move(phi), cfg);
}

EvolutionTrace run_similarity(const GridFunction& v, double T, const SolverConfig& cfg) {
  return run_similarity(
      [&v](double y) { return interpolate_radial(v.grid, v.values, y); }, T, cfg);
}

ShootResult shoot_T(const GridFunction& v, double delta, const SolverConfig& cfg,
                    const ShootOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("shoot_T: delta must lie in (0, 1)");
  ShootResult out;
  double lo = 1.0 - delta;
  double hi = 1.0 + delta;
  out.bracket_history.emplace_back(lo, hi);
  const double c_lo = run_similarity(v, lo, cfg).c1.back();
  const double c_hi = run_similarity(v, hi, cfg).c1.back();
  if ((c_lo < 0.0) == (c_hi < 0.0)) {
    out.verdict = ShootVerdict::lostBracket;
    out.T = 0.5 * (lo + hi);
    out.final_trace = run_similarity(v, out.T, cfg);
    return out;
  }
  const bool lo_negative = c_lo < 0.0;
  bool done = false;
  while (out.iterations < options.max_iter) {
    const double mid = 0.5 * (lo + hi);
    EvolutionTrace trace = run_similarity(v, mid, cfg);
    ++out.iterations;
    const double c_mid = trace.c1.back();
    out.T = mid;
    out.final_trace = std::move(trace);
    if (std::abs(c_mid) <= options.c1_tol || 0.5 * (hi - lo) <= options.width_tol) {
      done = true;
      break;
    }
    if ((c_mid < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
    out.bracket_history.emplace_back(lo, hi);
  }
  double c1_max = 0.0;
  for (double c : out.final_trace.c1) c1_max = std::max(c1_max, std::abs(c));
  const bool bounded = !out.final_trace.blowup && c1_max <= options.c1_bound;
  out.verdict = done && bounded ? ShootVerdict::converged : ShootVerdict::maxIter;
  return out;
}

DecayFit fit_decay_rate(const EvolutionTrace& trace, double lo, double hi) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.tau[i] >= lo && trace.tau[i] <= hi && trace.sigma[i] > 0.0) {
      xs.push_back(trace.tau[i]);
      ys.push_back(std::log(trace.sigma[i]));
    }
  }
  if (xs.size() < 10) throw std::invalid_argument("fit_decay_rate: fewer than 10 samples in window");
  const LinearFit line = linear_fit(xs, ys);
  DecayFit fit;
  fit.samples = xs.size();
  fit.omega = -line.slope;
  fit.r2 = line.r2;
  return fit;
}

}  // namespace ymflow::evolve
