#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "generators.hpp"
#include "ymflow/ggmt.hpp"
#include "ymflow/model.hpp"

using namespace ymflow;
using namespace ymflow::ggmt;
using ymflow::testing::Gen;
using ymflow::testing::rel_err;

namespace {

// tests/oracles/derive.py: sympy roots of the numerator of Q, mpmath quadrature
struct PairOracle {
  int n;
  int p;
  double cutoff;
  double B_over;
  double B_tight;
};
constexpr PairOracle kPairs[] = {
    {8, 4, 4.7, 0.57346573537768694787, 0.57346533422254622879},
    {9, 4, 5.1, 0.7177065441284723613, 0.71770652319203014967},
    {10, 6, 5.5, 0.71114900254665995511, 0.71114900244055364038},
    {11, 6, 5.8, 0.89510369222929803027, 0.89510369222929803027},
};
constexpr double kRhoStar[] = {4.080464795698089255624686, 4.6043764010029087139791, 5.045975676082050737659253,
                               5.438882533384360216156564, 5.798376768678947133711453};

double Q(const Dimension& dim, double rho) { return eval_profile(ProfileKind::QSusy, dim, rho); }

}  // namespace

TEST_CASE("negative part of Q") {
  const Dimension d6 = make_dimension(6);
  CHECK(q_minus(d6, 5.0) == 0.0);
  CHECK(rel_err(q_minus(d6, 2.0), -4.1737453887760844878) < 1e-14);
  Gen gen(31);
  for (int k = 0; k < 500; ++k) {
    const Dimension dim = make_dimension(static_cast<int>(gen.integer(5, 9)));
    const double rho = gen.uniform(1e-3, 30.0);
    CHECK(q_minus(dim, rho) <= 0.0);
    CHECK(q_minus(dim, rho) == std::min(Q(dim, rho), 0.0));
  }
}

TEST_CASE("positivity threshold") {
  for (int n = 7; n <= 11; ++n) {
    const Dimension dim = make_dimension(n - 2);
    const double rs = positivity_threshold(dim);
    CHECK(rel_err(rs, kRhoStar[n - 7]) < 1e-13);
    CHECK(std::abs(Q(dim, rs)) <= 1e-10);
    CHECK(Q(dim, rs + 1.0) > 0.0);
    bool negative_below = false;
    for (int k = 1; k < 1000; ++k) negative_below |= Q(dim, rs * k / 1000.0) < 0.0;
    CHECK(negative_below);
    bool positive_above = true;
    for (int k = 1; k <= 2000; ++k) positive_above &= Q(dim, rs * (1.0 + 9.0 * k / 2000.0)) > 0.0;
    CHECK(positive_above);
    const auto changes = q_sign_changes(dim);
    REQUIRE_FALSE(changes.empty());
    CHECK(changes.back() == rs);
  }
  const Dimension d6 = make_dimension(6);
  CHECK(positivity_threshold(d6) > 4.0);
  CHECK(positivity_threshold(d6) < 4.7);
  CHECK_THROWS_AS(positivity_threshold(make_dimension(10)), std::invalid_argument);
}

TEST_CASE("overestimate cutoff") {
  for (const auto& pair : kPairs) {
    const auto cut = overestimate_cutoff(make_dimension(pair.n - 2));
    CHECK(static_cast<double>(cut) == pair.cutoff);
  }
  CHECK(overestimate_cutoff(make_dimension(6)) == quad::Rational(47, 10));
}

TEST_CASE("GGMT prefactor") {
  CHECK(rel_err(ggmt_constant(8, 4), 945.0 / std::pow(8.0, 9)) < 1e-14);
  // 3^3 7! / (4^4 (3!)^2) = 945/64, then / 8^7
  const double integer_route = (27.0 * 5040.0 / (256.0 * 36.0)) / std::pow(8.0, 7);
  CHECK(integer_route == 945.0 / 64.0 / std::pow(8.0, 7));
  CHECK(rel_err(ggmt_constant(8, 4), integer_route) < 1e-14);
  for (int n = 1; n <= 12; ++n) CHECK(rel_err(ggmt_constant(n, 1.0), 1.0 / n) < 1e-15);
  CHECK_THROWS_AS(ggmt_constant(8, 0.5), std::invalid_argument);
}

TEST_CASE("B for the four pairs on every pathway") {
  for (const auto& pair : kPairs) {
    const Dimension dim = make_dimension(pair.n - 2);
    const auto over = compute_B(dim, pair.p, Pathway::paperOverestimate);
    const auto tight = compute_B(dim, pair.p, Pathway::tightQminus);
    const auto exact = compute_B(dim, pair.p, Pathway::exactCertificate);
    CHECK(rel_err(over.B, pair.B_over) < 1e-11);
    CHECK(rel_err(exact.B, pair.B_over) < 1e-14);
    CHECK(rel_err(tight.B, pair.B_tight) < 1e-10);
    CHECK(rel_err(over.B, exact.B) < 1e-10);
    CHECK(tight.B <= over.B);
    for (const auto* r : {&over, &tight, &exact}) {
      CHECK(r->passes == (r->B < 1.0));
      CHECK(r->passes);
      CHECK(r->B >= 0.0);
      CHECK(r->n == pair.n);
      CHECK(r->alpha == (pair.n * pair.n - 1) / 4.0);
      CHECK(r->B == doctest::Approx(r->constant * r->integral.value).epsilon(1e-15));
    }
    CHECK(exact.integral.exact.has_value());
    CHECK(over.upper_limit == pair.cutoff);
    CHECK(tight.upper_limit == tight.rho_star);
  }
}

TEST_CASE("compute_B input handling") {
  const Dimension d6 = make_dimension(6);
  CHECK_THROWS_AS(compute_B(d6, 5, Pathway::exactCertificate), std::invalid_argument);
  CHECK_THROWS_AS(compute_B(d6, 0.5, Pathway::tightQminus), std::invalid_argument);
  CHECK_THROWS_AS(compute_B(make_dimension(10), 4, Pathway::tightQminus), std::invalid_argument);
  const auto odd = compute_B(d6, 5, Pathway::tightQminus);
  CHECK(odd.B > 0.0);
  CHECK(odd.passes == (odd.B < 1.0));
  const auto frac = compute_B(d6, 4.5, Pathway::tightQminus);
  CHECK(frac.B > 0.0);
}

TEST_CASE("pathway names") {
  for (auto p : {Pathway::paperOverestimate, Pathway::tightQminus, Pathway::exactCertificate}) {
    CHECK(parse_pathway(to_string(p)) == p);
  }
  CHECK(parse_pathway("paper") == Pathway::paperOverestimate);
  CHECK(parse_pathway("tight") == Pathway::tightQminus);
  CHECK(parse_pathway("exact") == Pathway::exactCertificate);
  CHECK_FALSE(parse_pathway("other").has_value());
}

TEST_CASE("mu closed form") {
  // tests/oracles/derive.py
  CHECK(rel_err(mu(4, 0), 0.5101372555037929997) < 1e-13);
  CHECK(rel_err(mu(2, 0), 0.81649658092772603273) < 1e-13);
  for (int n = 7; n <= 11; ++n) {
    for (int p = 2; p <= 8; ++p) {
      const double alpha = (n * n - 1) / 4.0;
      CHECK(std::abs(ggmt_constant(n, p) * std::pow(mu(p, alpha), p) - 1.0) <= 1e-12);
    }
  }
  CHECK(rel_err(std::pow(mu(4, 63.0 / 4.0), 4), std::pow(8.0, 9) / 945.0) < 1e-12);
  CHECK_THROWS_AS(mu(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mu(4.0, -0.25), std::invalid_argument);
}

TEST_CASE("variational oracle for mu") {
  CHECK(std::abs(variational_mu_oracle(4) - mu(4, 0)) <= 1e-6);
  CHECK(std::abs(variational_mu_oracle(2) - mu(2, 0)) <= 1e-6);
  CHECK(std::abs(variational_mu_oracle(6) - mu(6, 0)) <= 1e-6);

  for (double p : {2.0, 4.0}) {
    const double c = 1.0 / (2.0 * (p - 1.0));
    auto phi = [=](double x) {
      return std::pow(1.0 / std::cosh(c * x), p - 1.0) * (1.0 + 0.1 * x * std::exp(-x * x));
    };
    auto dphi = [=](double x) {
      const double sech = 1.0 / std::cosh(c * x);
      const double base = std::pow(sech, p - 1.0);
      const double dbase = -(p - 1.0) * c * base * std::tanh(c * x);
      const double bump = 1.0 + 0.1 * x * std::exp(-x * x);
      const double dbump = 0.1 * std::exp(-x * x) * (1.0 - 2.0 * x * x);
      return dbase * bump + base * dbump;
    };
    CHECK(rayleigh_quotient(p, phi, dphi) > mu(p, 0));
  }
  CHECK_THROWS_AS(variational_mu_oracle(1.0), std::invalid_argument);
}

TEST_CASE("theorem verdict") {
  const auto empty = theorem_verdict(0.0, [](double) { return 0.0; }, 4);
  CHECK(empty.lhs == 0.0);
  CHECK(empty.passes);
  CHECK(std::find(empty.conclusions.begin(), empty.conclusions.end(), "zero is not an eigenvalue") !=
        empty.conclusions.end());

  const Dimension d6 = make_dimension(6);
  const double rs = positivity_threshold(d6);
  VerdictOptions opt;
  opt.upper = rs;
  opt.breakpoints = q_sign_changes(d6);
  opt.breakpoints.pop_back();
  auto vminus = [&](double r) { return r > 0.0 ? -q_minus(d6, r) : 0.0; };
  const auto v = theorem_verdict(63.0 / 4.0, vminus, 4, opt);
  CHECK(v.passes);
  CHECK(rel_err(v.lhs / v.rhs, kPairs[0].B_tight) < 1e-9);
  CHECK(v.rhs == doctest::Approx(std::pow(mu(4, 63.0 / 4.0), 4)).epsilon(1e-14));

  const auto big = theorem_verdict(63.0 / 4.0, [&](double r) { return 10.0 * vminus(r); }, 4, opt);
  CHECK_FALSE(big.passes);
  CHECK(big.conclusions.empty());
  CHECK(rel_err(big.lhs, 1e4 * v.lhs) < 1e-9);
  CHECK_THROWS_AS(theorem_verdict(0.0, [](double) { return -1.0; }, 4), std::invalid_argument);
}

TEST_CASE("theorem verdict is monotone under shrinking the potential") {
  Gen gen(32);
  for (int trial = 0; trial < 40; ++trial) {
    const double amp = gen.log_uniform(1e-2, 1e2);
    const double centre = gen.uniform(0.5, 4.0);
    const double width = gen.uniform(0.2, 1.5);
    const double p = static_cast<double>(gen.integer(2, 6));
    const double alpha = gen.uniform(0.0, 30.0);
    auto bump = [=](double r) {
      const double x = (r - centre) / width;
      return amp * std::exp(-x * x);
    };
    VerdictOptions opt;
    opt.upper = centre + 12.0 * width;
    const auto base = theorem_verdict(alpha, bump, p, opt);
    const double c = gen.uniform(0.0, 1.0);
    const auto shrunk = theorem_verdict(alpha, [&](double r) { return c * bump(r); }, p, opt);
    CHECK(shrunk.lhs <= base.lhs);
    if (base.passes) CHECK(shrunk.passes);
  }
}

TEST_CASE("p scan") {
  const auto scan = scan_p(make_dimension(6), 2, 8);
  REQUIRE(scan.reports.size() == 7);
  double best = INFINITY;
  for (const auto& r : scan.reports) {
    CHECK(r.pathway == Pathway::tightQminus);
    best = std::min(best, r.B);
  }
  CHECK(scan.best_B == best);
  CHECK(scan.reports[2].p == 4.0);
  CHECK(scan.reports[2].passes);
  CHECK_THROWS_AS(scan_p(make_dimension(6), 0, 3), std::invalid_argument);
}
