#pragma once

// Bound-state criterion for the supersymmetric partner operator
//
//   A_S = -d^2/drho^2 + (n^2-1)/(4 rho^2) + Q(rho)
//
// and the general form -u'' + alpha/rho^2 u + V u on the half-line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ymflow/exact_pf.hpp"
#include "ymflow/model.hpp"
#include "ymflow/quadrature.hpp"

namespace ymflow::ggmt {

enum class Pathway {
  paperOverestimate,  ///< integral of rho^{2p-1} |Q|^p over [0, cutoff]
  tightQminus,        ///< integral of rho^{2p-1} |Q_-|^p over [0, rho*]
  exactCertificate,   ///< the overestimate integral, by exact partial fractions
};

std::string_view to_string(Pathway pathway);
/// Accepts the enum names and the short forms paper, tight, exact.
std::optional<Pathway> parse_pathway(std::string_view text);

struct GgmtReport {
  int n = 0;
  double p = 0.0;
  double alpha = 0.0;
  double rho_star = 0.0;
  /// Upper integration limit (cutoff for the overestimate pathways, rho* otherwise).
  double upper_limit = 0.0;
  /// Exact upper limit as a rational string.
  std::string upper_limit_exact;
  quad::IntegralResult integral;
  double constant = 0.0;
  double B = 0.0;
  bool passes = false;
  Pathway pathway = Pathway::paperOverestimate;
};

/// min{Q(rho), 0}; requires rho > 0.
double q_minus(const Dimension& dim, double rho);

/// Largest positive root of Q. Q > 0 beyond it. Requires b > 0; throws
/// std::runtime_error if Q has no sign change in (0, 100).
double positivity_threshold(const Dimension& dim);

/// Every sign change of Q in (0, 100), ascending.
std::vector<double> q_sign_changes(const Dimension& dim);

/// Smallest multiple of 1/10 strictly above rho* (47/10 for n = 8).
quad::Rational overestimate_cutoff(const Dimension& dim);

/// (p-1)^{p-1} Gamma(2p) / (n^{2p-1} p^p Gamma(p)^2); p = 1 is the limit 1/n.
double ggmt_constant(int n, double p);

/// exactCertificate needs an even integer p. All pathways need b > 0.
GgmtReport compute_B(const Dimension& dim, double p, Pathway pathway);

/// (4 alpha + 1)^{(2p-1)/(2p)} p/(p-1) ((p-1) Gamma(p)^2 / Gamma(2p))^{1/p}.
double mu(double p, double alpha);

/// int (phi'^2 + phi^2/4) dx / (int |phi|^{2p/(p-1)} dx)^{(p-1)/p} over R.
double rayleigh_quotient(double p, const quad::Integrand& phi, const quad::Integrand& dphi);

/// rayleigh_quotient at phi = sech^{p-1}(x / (2(p-1))).
double variational_mu_oracle(double p);

struct TheoremVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  bool passes = false;
  std::vector<std::string> conclusions;
};

struct VerdictOptions {
  double upper = 0.0;  ///< 0 means +infinity
  std::vector<double> breakpoints;
};

/// lhs = int_0^inf rho^{2p-1} vminus^p, rhs = mu(p, alpha)^p.
TheoremVerdict theorem_verdict(double alpha, const quad::Integrand& vminus, double p,
                               const VerdictOptions& options = {});

struct PScan {
  std::vector<GgmtReport> reports;
  double best_p = 0.0;
  double best_B = 0.0;
};

/// tightQminus reports for p = lo, lo+1, ..., hi.
PScan scan_p(const Dimension& dim, int lo, int hi);

}  // namespace ymflow::ggmt
