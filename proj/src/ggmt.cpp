#include "ymflow/ggmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ymflow::ggmt {
namespace {

using quad::Float50;

struct Cubic {
  std::vector<double> coeffs;
  std::vector<Float50> wide;

  explicit Cubic(const Dimension& dim) {
    for (const auto& c : quad::susy_numerator(dim)) {
      wide.push_back(c.to_float50());
      coeffs.push_back(c.to_double());
    }
  }
  [[nodiscard]] double operator()(double s) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
    return acc;
  }
  [[nodiscard]] Float50 eval(const Float50& s) const {
    Float50 acc = 0;
    for (auto it = wide.rbegin(); it != wide.rend(); ++it) acc = acc * s + *it;
    return acc;
  }
};

void require_profile(const Dimension& dim) {
  if (!dim.has_profile()) throw std::invalid_argument("ggmt: requires b > 0");
}

double sign_change_root(const Cubic& cubic, double lo, double hi) {
  Float50 a = lo;
  Float50 b = hi;
  const bool lo_negative = cubic.eval(a * a) < 0;
  for (int it = 0; it < 200 && b - a > Float50(1e-30); ++it) {
    const Float50 mid = (a + b) / 2;
    if ((cubic.eval(mid * mid) < 0) == lo_negative) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return static_cast<double>((a + b) / 2);
}

}  // namespace

std::string_view to_string(Pathway pathway) {
  switch (pathway) {
    case Pathway::paperOverestimate: return "paperOverestimate";
    case Pathway::tightQminus: return "tightQminus";
    case Pathway::exactCertificate: return "exactCertificate";
  }
  return "unknown";
}

std::optional<Pathway> parse_pathway(std::string_view text) {
  if (text == "paper" || text == "paperOverestimate") return Pathway::paperOverestimate;
  if (text == "tight" || text == "tightQminus") return Pathway::tightQminus;
  if (text == "exact" || text == "exactCertificate") return Pathway::exactCertificate;
  return std::nullopt;
}

double q_minus(const Dimension& dim, double rho) {
  return std::min(eval_profile(ProfileKind::QSusy, dim, rho), 0.0);
}

std::vector<double> q_sign_changes(const Dimension& dim) {
  require_profile(dim);
  const Cubic cubic(dim);
  std::vector<double> roots;
  constexpr double kStep = 1e-3;
  double prev_rho = kStep;
  double prev = cubic(prev_rho * prev_rho);
  for (int k = 2; k <= 100000; ++k) {
    const double rho = k * kStep;
    const double value = cubic(rho * rho);
    if ((value < 0) != (prev < 0)) roots.push_back(sign_change_root(cubic, prev_rho, rho));
    prev = value;
    prev_rho = rho;
  }
  return roots;
}

double positivity_threshold(const Dimension& dim) {
  const auto roots = q_sign_changes(dim);
  if (roots.empty()) throw std::runtime_error("positivity_threshold: no sign change of Q in (0, 100)");
  const Cubic cubic(dim);
  // Cauchy bound on the roots in s; beyond it the positive leading term wins.
  const double lead = cubic.coeffs.back();
  double bound = 0.0;
  for (std::size_t k = 0; k + 1 < cubic.coeffs.size(); ++k) {
    bound = std::max(bound, std::abs(cubic.coeffs[k] / lead));
  }
  if (!(lead > 0.0) || 1.0 + bound > 1e4) {
    throw std::runtime_error("positivity_threshold: cannot certify Q > 0 beyond the scan");
  }
  return roots.back();
}

quad::Rational overestimate_cutoff(const Dimension& dim) {
  const double rho_star = positivity_threshold(dim);
  long long tenths = static_cast<long long>(std::ceil(10.0 * rho_star));
  if (static_cast<double>(tenths) <= 10.0 * rho_star) ++tenths;
  return {tenths, 10};
}

double ggmt_constant(int n, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("ggmt_constant: p must be >= 1");
  if (n < 1) throw std::invalid_argument("ggmt_constant: n must be positive");
  const double g = quad::gamma(p);
  return std::pow(p - 1.0, p - 1.0) * quad::gamma(2.0 * p) /
         (std::pow(static_cast<double>(n), 2.0 * p - 1.0) * std::pow(p, p) * g * g);
}

GgmtReport compute_B(const Dimension& dim, double p, Pathway pathway) {
  require_profile(dim);
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("compute_B: p must be >= 1");
  const bool even = p == std::floor(p) && static_cast<long long>(p) % 2 == 0;
  if (pathway == Pathway::exactCertificate && !even) {
    throw std::invalid_argument("compute_B: exactCertificate needs an even integer p");
  }

  GgmtReport report;
  report.n = dim.n;
  report.p = p;
  report.alpha = (dim.n * dim.n - 1.0) / 4.0;
  report.pathway = pathway;
  report.rho_star = positivity_threshold(dim);
  report.constant = ggmt_constant(dim.n, p);

  const auto roots = q_sign_changes(dim);
  if (pathway == Pathway::tightQminus) {
    report.upper_limit = report.rho_star;
    report.upper_limit_exact = "";
    auto integrand = [&dim, p](double rho) {
      if (rho <= 0.0) return 0.0;
      return std::pow(rho, 2.0 * p - 1.0) * std::pow(-q_minus(dim, rho), p);
    };
    quad::AdaptiveOptions options;
    options.breakpoints.assign(roots.begin(), roots.end() - 1);
    report.integral = quad::adaptive_integrate(integrand, 0.0, report.rho_star, 1e-12, options);
  } else {
    const quad::Rational cutoff = overestimate_cutoff(dim);
    report.upper_limit = static_cast<double>(cutoff);
    report.upper_limit_exact = quad::to_string(cutoff);
    if (pathway == Pathway::exactCertificate) {
      const auto ref = quad::expand_integrand(dim, static_cast<int>(p));
      report.integral = quad::exact_pf_integrate(ref, 0, cutoff);
    } else {
      auto integrand = [&dim, p, even](double rho) {
        if (rho <= 0.0) return 0.0;
        const double q = eval_profile(ProfileKind::QSusy, dim, rho);
        return std::pow(rho, 2.0 * p - 1.0) * (even ? std::pow(q, p) : std::pow(std::abs(q), p));
      };
      quad::AdaptiveOptions options;
      options.breakpoints = roots;
      report.integral =
          quad::adaptive_integrate(integrand, 0.0, report.upper_limit, 1e-13, options);
    }
  }
  report.B = report.constant * report.integral.value;
  report.passes = report.B < 1.0;
  return report;
}

double mu(double p, double alpha) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("mu: p must be > 1");
  if (!(alpha > -0.25) || !std::isfinite(alpha)) throw std::invalid_argument("mu: alpha must be > -1/4");
  const double g = quad::gamma(p);
  return std::pow(4.0 * alpha + 1.0, (2.0 * p - 1.0) / (2.0 * p)) * p / (p - 1.0) *
         std::pow((p - 1.0) * g * g / quad::gamma(2.0 * p), 1.0 / p);
}

double rayleigh_quotient(double p, const quad::Integrand& phi, const quad::Integrand& dphi) {
  if (!(p > 1.0)) throw std::invalid_argument("rayleigh_quotient: p must be > 1");
  const double q = 2.0 * p / (p - 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  auto both_sides = [inf](const quad::Integrand& f) {
    auto folded = [&f](double x) { return f(x) + f(-x); };
    return quad::adaptive_integrate(folded, 0.0, inf, 1e-12).value;
  };
  const double energy = both_sides([&](double x) {
    const double v = phi(x);
    const double dv = dphi(x);
    return dv * dv + 0.25 * v * v;
  });
  const double mass = both_sides([&](double x) { return std::pow(std::abs(phi(x)), q); });
  return energy / std::pow(mass, (p - 1.0) / p);
}

double variational_mu_oracle(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("variational_mu_oracle: p must be > 1");
  const double scale = 1.0 / (2.0 * (p - 1.0));
  auto phi = [p, scale](double x) { return std::pow(1.0 / std::cosh(scale * x), p - 1.0); };
  auto dphi = [p, scale](double x) {
    const double y = scale * x;
    return -0.5 * std::pow(1.0 / std::cosh(y), p - 1.0) * std::tanh(y);
  };
  return rayleigh_quotient(p, phi, dphi);
}

TheoremVerdict theorem_verdict(double alpha, const quad::Integrand& vminus, double p,
                               const VerdictOptions& options) {
  TheoremVerdict out;
  out.rhs = std::pow(mu(p, alpha), p);
  auto integrand = [&vminus, p](double rho) {
    if (rho <= 0.0) return 0.0;
    const double v = vminus(rho);
    if (v < 0.0) throw std::invalid_argument("theorem_verdict: Vminus must be non-negative");
    return v == 0.0 ? 0.0 : std::pow(rho, 2.0 * p - 1.0) * std::pow(v, p);
  };
  const double upper =
      options.upper > 0.0 ? options.upper : std::numeric_limits<double>::infinity();
  quad::AdaptiveOptions quad_options;
  quad_options.breakpoints = options.breakpoints;
  quad_options.abs_tol = 1e-300;
  out.lhs = quad::adaptive_integrate(integrand, 0.0, upper, 1e-12, quad_options).value;
  out.passes = out.lhs < out.rhs;
  if (out.passes) {
    out.conclusions = {"spectrum contained in [0, +infinity)", "zero is not an eigenvalue"};
  }
  return out;
}

PScan scan_p(const Dimension& dim, int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("scan_p: need 1 <= lo <= hi");
  PScan scan;
  scan.best_B = std::numeric_limits<double>::infinity();
  for (int p = lo; p <= hi; ++p) {
    scan.reports.push_back(compute_B(dim, p, Pathway::tightQminus));
    if (scan.reports.back().B < scan.best_B) {
      scan.best_B = scan.reports.back().B;
      scan.best_p = p;
    }
  }
  return scan;
}

}  // namespace ymflow::ggmt
