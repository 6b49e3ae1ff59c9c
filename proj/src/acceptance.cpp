#include "ymflow/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "ymflow/evolve.hpp"
#include "ymflow/exact_pf.hpp"
#include "ymflow/ggmt.hpp"
#include "ymflow/model.hpp"
#include "ymflow/physical.hpp"
#include "ymflow/spectral.hpp"

namespace ymflow::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

void ggmt_verdicts(Outcome& out) {
  const std::pair<int, int> pairs[] = {{8, 4}, {9, 4}, {10, 6}, {11, 6}};
  for (const auto& [n, p] : pairs) {
    const Dimension dim = make_dimension(n - 2);
    const auto paper = ggmt::compute_B(dim, p, ggmt::Pathway::paperOverestimate);
    const auto tight = ggmt::compute_B(dim, p, ggmt::Pathway::tightQminus);
    const auto exact = ggmt::compute_B(dim, p, ggmt::Pathway::exactCertificate);
    const double agree = std::abs(paper.B - exact.B) / exact.B;
    out.detail << "B(" << n << "," << p << ")=" << fmt(paper.B, 10) << "/" << fmt(tight.B, 10) << "/"
               << fmt(exact.B, 10) << " agree=" << fmt(agree, 2) << "; ";
    out.check(paper.passes && tight.passes && exact.passes, "B < 1 on all pathways");
    out.check(agree <= 1e-10, "overestimate vs exact within 1e-10");
    if (n == 8) {
      const double target = 945.0 / std::pow(8.0, 9);
      const double rel = std::abs(paper.constant - target) / target;
      out.detail << "constant rel err " << fmt(rel, 2) << "; ";
      out.check(rel <= 1e-12, "constant equals 945/8^9");
    }
  }
}

void positivity(Outcome& out) {
  const Dimension dim = make_dimension(6);
  const double rho_star = ggmt::positivity_threshold(dim);
  const double q47 = eval_profile(ProfileKind::QSusy, dim, 4.7);
  out.detail << "rho*=" << fmt(rho_star, 12) << " Q(4.7)=" << fmt(q47, 8);
  out.check(rho_star < 4.7, "rho* < 47/10");
  out.check(q47 > 0.0, "Q(47/10) > 0");
}

void spectral_certification(Outcome& out) {
  for (int n = 7; n <= 11; ++n) {
    const auto start = Clock::now();
    const Dimension dim = make_dimension(n - 2);
    const auto lin = spectral::eigen_extrapolated({dim, spectral::PotentialKind::Linearized}, 20.0, 4000, 5);
    const auto susy = spectral::eigen_extrapolated({dim, spectral::PotentialKind::Susy}, 20.0, 4000, 4);
    const auto& l = lin.best();
    const auto& s = susy.best();
    std::vector<double> positive(l.begin() + 1, l.end());
    const auto iso = spectral::pair_spectra(positive, s);
    bool susy_positive = true;
    for (double v : s) susy_positive = susy_positive && v > 0.0;
    const double elapsed = seconds_since(start);
    out.detail << "n=" << n << " l0=" << fmt(l[0], 8) << " l1=" << fmt(l[1], 6)
               << " mismatch=" << fmt(iso.max_mismatch, 2) << " (" << fmt(elapsed, 3) << " s); ";
    out.check(std::abs(l[0] + 1.0) <= 5e-3, "lambda0 = -1 +- 5e-3");
    out.check(l[1] >= 0.05, "lambda1 >= 0.05");
    out.check(susy_positive, "Susy spectrum positive");
    out.check(iso.max_mismatch <= 5e-3, "SUSY pairing <= 5e-3");
    out.check(elapsed < 60.0, "runtime < 60 s for n=" + std::to_string(n));
  }
}

void calibration(Outcome& out) {
  const Dimension dim = make_dimension(6);
  const auto free = spectral::eigen_extrapolated({dim, spectral::PotentialKind::Free}, 20.0, 4000, 3);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(free.best()[k] - (k + 1.0)));
  out.detail << "eigenvalues " << fmt(free.best()[0], 10) << ", " << fmt(free.best()[1], 10) << ", "
             << fmt(free.best()[2], 10) << " max err " << fmt(worst, 2);
  out.check(worst <= 1e-3, "free spectrum {1,2,3} within 1e-3");
}

void residuals(Outcome& out) {
  for (int d = 5; d <= 9; ++d) {
    const Dimension dim = make_dimension(d);
    const RadialGrid grid(20.0, 4000);
    const double stationary = sup_norm(stationary_residual(ProfileKind::W, grid, dim).values);
    const double eigen = spectral::eigenfunction_residual(dim);
    double susy = 0.0;
    const double n = dim.n;
    for (int k = 0; k <= 1990; ++k) {
      const double rho = 0.1 + 0.01 * k;
      const double lhs = eval_profile(ProfileKind::qFree, dim, rho) - eval_profile(ProfileKind::V, dim, rho) -
                         2.0 * log_gtilde_d2(dim, rho) - (n * n - 1.0) / (4.0 * rho * rho) -
                         eval_profile(ProfileKind::QSusy, dim, rho);
      susy = std::max(susy, std::abs(lhs));
    }
    double videntity = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double rho = std::pow(10.0, -3.0 + 6.0 * k / 99.0);
      const double v = eval_profile(ProfileKind::V, dim, rho);
      const double w = eval_profile(ProfileKind::W, dim, rho);
      const double alt = 3.0 * (n - 4.0) * w * (2.0 - rho * rho * w);
      videntity = std::max(videntity, std::abs(v - alt) / std::max(1.0, std::abs(v)));
    }
    out.detail << "d=" << d << " stat=" << fmt(stationary, 2) << " eig=" << fmt(eigen, 2)
               << " susy=" << fmt(susy, 2) << " V=" << fmt(videntity, 2) << "; ";
    out.check(stationary <= 1e-10, "stationary residual <= 1e-10");
    out.check(eigen <= 1e-9, "eigenfunction residual <= 1e-9");
    out.check(susy <= 1e-9, "SUSY identity <= 1e-9");
    out.check(videntity <= 1e-12, "V identity <= 1e-12");
  }
}

void linear_dynamics(Outcome& out) {
  {
    evolve::SolverConfig cfg;
    cfg.dim = make_dimension(5);
    cfg.grid = RadialGrid(20.0, 2000);
    cfg.dt = 1e-3;
    cfg.tau_max = 1.0;
    cfg.model = evolve::Model::free;
    cfg.sample_interval = 1.0;
    const double beta = 0.25;
    std::vector<double> f0(cfg.grid.size());
    for (std::size_t i = 0; i < f0.size(); ++i) f0[i] = std::exp(-beta * cfg.grid.rho(i) * cfg.grid.rho(i));
    const auto trace = evolve::run_from(f0, cfg);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < f0.size(); ++i) {
      const double exact = evolve::ou_oracle(cfg.dim, beta, 1.0, cfg.grid.rho(i));
      err = std::max(err, std::abs(trace.final_state[i] - exact));
      scale = std::max(scale, std::abs(exact));
    }
    out.detail << "OU rel sup err " << fmt(err / scale, 3) << "; ";
    out.check(err / scale <= 1e-4, "OU match <= 1e-4");
  }
  {
    evolve::SolverConfig cfg;
    cfg.dim = make_dimension(6);
    cfg.grid = RadialGrid(20.0, 2000);
    cfg.dt = 1e-3;
    cfg.tau_max = 2.0;
    cfg.model = evolve::Model::linearized;
    cfg.sample_interval = 1.0;
    std::vector<double> g(cfg.grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = eval_profile(ProfileKind::gMode, cfg.dim, cfg.grid.rho(i));
    const auto trace = evolve::run_from(g, cfg);
    const double factor = trace.c1[2] / trace.c1[1];
    const double rel = factor / std::exp(1.0) - 1.0;
    out.detail << "growth over 1 = " << fmt(factor, 8) << " (rel " << fmt(rel, 2) << ")";
    out.check(std::abs(rel) <= 0.01, "growth e^1 within 1%");
  }
}

evolve::SolverConfig shooting_config(int d) {
  evolve::SolverConfig cfg;
  cfg.dim = make_dimension(d);
  cfg.grid = RadialGrid(20.0, 2000);
  cfg.dt = 1e-2;
  cfg.tau_max = 14.0;
  cfg.sample_interval = 0.1;
  return cfg;
}

void nonlinear_stability(Outcome& out) {
  for (int d : {5, 6}) {
    const auto start = Clock::now();
    const auto cfg = shooting_config(d);
    auto bump = [&cfg](double eps) {
      return GridFunction::sample(cfg.grid, cfg.dim, [eps](double r) { return eps * std::exp(-r * r); });
    };
    const auto full = evolve::shoot_T(bump(1e-2), 0.1, cfg);
    const auto half = evolve::shoot_T(bump(5e-3), 0.1, cfg);
    const auto fit = evolve::fit_decay_rate(full.final_trace, 2.0, 8.0);
    const double gap = spectral::spectral_gap(cfg.dim);
    const double ratio = (full.T - 1.0) / (half.T - 1.0);
    const double elapsed = seconds_since(start);
    out.detail << "d=" << d << " T=" << fmt(full.T, 10) << " (" << evolve::to_string(full.verdict)
               << ") omega=" << fmt(fit.omega, 6) << " gap=" << fmt(gap, 6)
               << " ratio=" << fmt(ratio, 5) << " (" << fmt(elapsed, 3) << " s); ";
    out.check(full.verdict == evolve::ShootVerdict::converged &&
                  half.verdict == evolve::ShootVerdict::converged,
              "shoot_T converged");
    out.check(std::abs(full.T - 1.0) <= 5e-2, "|T-1| <= 5e-2");
    out.check(fit.omega > 0.0 && std::abs(fit.omega / gap - 1.0) <= 0.2, "omega within 20% of gap");
    out.check(std::abs(ratio / 2.0 - 1.0) <= 0.3, "halving eps halves |T-1| within 30%");
    out.check(elapsed < 900.0, "runtime < 15 min for d=" + std::to_string(d));
  }
}

evolve::PhysicalConfig physical_config(int d) {
  evolve::PhysicalConfig cfg;
  cfg.dim = make_dimension(d);
  cfg.grid = RadialGrid(5.0, 8000);
  return cfg;
}

void physical_blowup(Outcome& out) {
  for (int d : {5, 6}) {
    const auto cfg = physical_config(d);
    const Dimension dim = cfg.dim;
    const auto exact = evolve::run_physical([&dim](double r) { return evolve::self_similar_data(dim, r); }, cfg);
    const auto larger =
        evolve::run_physical([&dim](double r) { return 1.2 * evolve::self_similar_data(dim, r); }, cfg);
    out.detail << "d=" << d << " T=" << fmt(exact.T_fit, 8) << " dist=" << fmt(exact.profile_distance, 4)
               << " r2=" << fmt(exact.fit_r2, 8) << " | 1.2x T=" << fmt(larger.T_fit, 6)
               << " dist=" << fmt(larger.profile_distance, 4) << " r2=" << fmt(larger.fit_r2, 8) << "; ";
    out.check(exact.blowup && std::abs(exact.T_fit - 1.0) <= 2e-2, "Tfit = 1 +- 2e-2");
    out.check(exact.profile_distance <= 2e-2, "profile distance <= 2e-2");
    out.check(larger.blowup && larger.profile_distance <= 5e-2, "1.2x blowup with distance <= 5e-2");
    out.check(exact.fit_r2 >= 0.999 && larger.fit_r2 >= 0.999, "r2 >= 0.999");
  }
}

void symmetry(Outcome& out) {
  const auto cfg = physical_config(6);
  const Dimension dim = cfg.dim;
  auto u0 = [&dim](double r) { return evolve::self_similar_data(dim, r); };
  for (double lambda : {0.5, 2.0}) {
    const auto s = evolve::scaling_check(u0, lambda, cfg);
    out.detail << "lambda=" << lambda << " diff=" << fmt(s.max_relative_diff, 3)
               << " (grid misalignment " << fmt(s.grid_misalignment, 3) << ", T ratio err "
               << fmt(s.T_ratio_error, 3) << ", " << s.checkpoints << " checkpoints); ";
    out.check(s.checkpoints > 0, "checkpoints recorded");
    out.check(s.max_relative_diff <= 1e-3, "scaling_check <= 1e-3");
  }
}

struct Spec {
  int id;
  const char* name;
  double budget;
  void (*body)(Outcome&);
};

const Spec kCriteria[] = {
    {1, "GGMT verdicts", 5.0, ggmt_verdicts},
    {2, "Positivity threshold", 1.0, positivity},
    {3, "Spectral certification", 300.0, spectral_certification},
    {4, "Eigensolver calibration", 30.0, calibration},
    {5, "Closed-form residuals", 5.0, residuals},
    {6, "Linear dynamics", 60.0, linear_dynamics},
    {7, "Nonlinear stability", 1800.0, nonlinear_stability},
    {8, "Physical blowup", 900.0, physical_blowup},
    {9, "Symmetry", 300.0, symmetry},
};

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& c : kCriteria) ids.push_back(c.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  for (const auto& c : kCriteria) {
    if (c.id != id) continue;
    CriterionResult result;
    result.id = id;
    result.name = c.name;
    result.budget_seconds = c.budget;
    Outcome outcome;
    const auto start = Clock::now();
    try {
      c.body(outcome);
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.detail << "exception: " << e.what();
    }
    result.seconds = seconds_since(start);
    if (result.seconds > c.budget) {
      outcome.passed = false;
      outcome.detail << "FAILED runtime budget; ";
    }
    result.passed = outcome.passed;
    result.detail = outcome.detail.str();
    return result;
  }
  throw std::invalid_argument("run_criterion: unknown id " + std::to_string(id));
}

std::vector<CriterionResult> run(const std::vector<int>& ids,
                                 const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (int id : ids) {
    results.push_back(run_criterion(id));
    if (on_result) on_result(results.back());
  }
  return results;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " (" << fmt(r.seconds, 3)
      << " s / " << fmt(r.budget_seconds, 4) << " s): " << r.detail;
  return out.str();
}

}  // namespace ymflow::acceptance
