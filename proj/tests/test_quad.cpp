#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "generators.hpp"
#include "ymflow/exact_pf.hpp"
#include "ymflow/model.hpp"
#include "ymflow/quadrature.hpp"

using namespace ymflow;
using namespace ymflow::quad;
using ymflow::testing::Gen;
using ymflow::testing::rel_err;

namespace {

Rational random_rational(Gen& gen) {
  const long long num = gen.integer(-1000, 1000);
  const long long den = gen.integer(1, 97);
  return Rational(num, den);
}

QuadExt random_element(Gen& gen, long long m) { return {random_rational(gen), random_rational(gen), m}; }

double susy_integrand(const Dimension& dim, int p, double rho) {
  return std::pow(rho, 2 * p - 1) * std::pow(eval_profile(ProfileKind::QSusy, dim, rho), p);
}

}  // namespace

TEST_CASE("adaptive quadrature on simple integrals") {
  const auto lin = adaptive_integrate([](double r) { return r; }, 0.0, 1.0, 1e-14);
  CHECK(std::abs(lin.value - 0.5) <= 1e-14);
  CHECK(lin.method == Method::adaptive);

  // 2^6 Gamma(7/2); mpmath in tests/oracles/derive.py
  const auto moment = adaptive_integrate([](double r) { return std::pow(r, 6) * std::exp(-r * r / 4.0); }, 0.0,
                                         std::numeric_limits<double>::infinity(), 1e-12);
  CHECK(rel_err(moment.value, 212.69446210866192328) < 1e-12);
  CHECK(rel_err(moment.value, 64.0 * quad::gamma(3.5)) < 1e-12);
  CHECK(moment.error_bound >= 0.0);
}

TEST_CASE("adaptive quadrature validates input and reports failures") {
  auto one = [](double) { return 1.0; };
  CHECK_THROWS_AS(adaptive_integrate(one, 0.0, 1.0, 1e-15), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_integrate(one, 0.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_integrate(one, 1.0, 0.0, 1e-8), std::invalid_argument);

  AdaptiveOptions tight;
  tight.max_subdivisions = 3;
  try {
    adaptive_integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, 1e-14, tight);
    FAIL("expected a QuadratureFailure");
  } catch (const QuadratureFailure& e) {
    CHECK_FALSE(e.partial().converged);
    CHECK(e.partial().value > 0.0);
  }
}

TEST_CASE("breakpoints handle kinks") {
  AdaptiveOptions opt;
  opt.breakpoints = {0.3};
  const auto r = adaptive_integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-13, opt);
  CHECK(std::abs(r.value - (0.045 + 0.245)) < 1e-13);
}

TEST_CASE("gamma") {
  CHECK(quad::gamma(5.0) == 24.0);
  CHECK(quad::gamma(8.0) / (quad::gamma(4.0) * quad::gamma(4.0)) == 140.0);
  CHECK(quad::gamma(20.0) == 121645100408832000.0);
  CHECK(rel_err(quad::gamma(3.5), 3.3233509704478425512) < 1e-13);
  for (double z = 0.5; z <= 10.5; z += 1.0) CHECK(rel_err(quad::gamma(z + 1.0), z * quad::gamma(z)) < 1e-12);
  CHECK_THROWS_AS(quad::gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(quad::gamma(-1.5), std::invalid_argument);
}

TEST_CASE("rational strings") {
  CHECK(to_string(Rational(3, 4)) == "3/4");
  CHECK(to_string(Rational(-6, 3)) == "-2");
  CHECK(parse_rational("-22/14") == Rational(-11, 7));
  CHECK(parse_rational("5") == Rational(5));
  Gen gen(21);
  for (int k = 0; k < 50; ++k) {
    const Rational r = random_rational(gen);
    CHECK(parse_rational(to_string(r)) == r);
  }
}

TEST_CASE("square-free split") {
  CHECK(square_free_split(12) == std::pair<long long, long long>{2, 3});
  CHECK(square_free_split(8) == std::pair<long long, long long>{2, 2});
  CHECK(square_free_split(6) == std::pair<long long, long long>{1, 6});
  CHECK(square_free_split(1) == std::pair<long long, long long>{1, 1});
  CHECK(square_free_split(72) == std::pair<long long, long long>{6, 2});
}

TEST_CASE("quadratic field axioms") {
  Gen gen(22);
  for (long long m : {2LL, 3LL, 5LL, 6LL, 7LL, 10LL, 14LL}) {
    for (int trial = 0; trial < 40; ++trial) {
      const QuadExt u = random_element(gen, m);
      const QuadExt v = random_element(gen, m);
      const QuadExt w = random_element(gen, m);
      const QuadExt zero = QuadExt::rational(0, m);
      const QuadExt one = QuadExt::rational(1, m);
      CHECK((u + v) + w == u + (v + w));
      CHECK((u * v) * w == u * (v * w));
      CHECK(u + v == v + u);
      CHECK(u * v == v * u);
      CHECK(u * (v + w) == u * v + u * w);
      CHECK(u + zero == u);
      CHECK(u * one == u);
      CHECK(u - u == zero);
      CHECK(u + (-u) == zero);
      CHECK(u * u.conjugate() == QuadExt::rational(u.norm(), m));
      CHECK(u.norm() == u.x() * u.x() - Rational(m) * u.y() * u.y());
      if (!u.is_zero()) {
        CHECK(u * u.inverse() == one);
        CHECK((v / u) * u == v);
      }
      CHECK(u.pow(3) == u * u * u);
      CHECK(u.pow(0) == one);
      CHECK(QuadExt::from_record(u.record(), m) == u);
    }
  }
}

TEST_CASE("quadratic field edge cases") {
  const QuadExt a(1, 1, 2);
  const QuadExt b(1, 1, 3);
  CHECK_THROWS(a + b);
  CHECK_THROWS(a * b);
  CHECK_THROWS((void)QuadExt::rational(0, 2).inverse());
  const QuadExt folded(Rational(1, 2), Rational(3), 1);
  CHECK(folded.x() == Rational(7, 2));
  CHECK(folded.y() == 0);
  const QuadExt root2(0, 1, 2);
  CHECK(root2 * root2 == QuadExt::rational(2, 2));
  CHECK(std::abs(root2.to_double() - std::sqrt(2.0)) < 1e-16);
}

TEST_CASE("exact profile constants") {
  for (int d = 5; d <= 9; ++d) {
    const Dimension dim = make_dimension(d);
    const auto [a, b] = exact_profile_constants(dim);
    CHECK(rel_err(a.to_double(), dim.a) < 1e-15);
    CHECK(rel_err(b.to_double(), dim.b) < 1e-14);
    CHECK(a.m() == square_free_split(2 * d - 4).second);
  }
}

TEST_CASE("exact integration of elementary pieces") {
  const QuadExt one = QuadExt::rational(1, 1);
  RationalEvenFunction poly_only;
  poly_only.a = one;
  poly_only.b = one;
  poly_only.poly = {one};
  const auto half = exact_pf_integrate(poly_only, 0, 1);
  CHECK(half.value == 0.5);
  CHECK(half.method == Method::exactPF);

  // single pole 1/(s + 1): int_0^1 rho/(rho^2+1) = log(2)/2
  const auto pole = partial_fractions({one}, one, one, 1);
  CHECK(pole.poly_degree() == -1);
  CHECK(pole.max_pole_order() == 1);
  const auto log2 = exact_pf_integrate(pole, 0, 1);
  CHECK(rel_err(log2.value, 0.34657359027997265471) < 1e-16);
  REQUIRE(log2.exact.has_value());
  CHECK(log2.exact->value_decimal.rfind("3.465735902799726547086160607290882840377500671801", 0) == 0);
  CHECK(log2.error_bound <= std::abs(log2.value) * 1e-20);
}

TEST_CASE("partial fractions reconstruct random rational functions") {
  Gen gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const long long m = 2;
    const QuadExt a(Rational(gen.integer(1, 9), 4), Rational(gen.integer(0, 3), 8), m);
    const QuadExt b(Rational(gen.integer(1, 9), 3), Rational(gen.integer(-1, 1), 7), m);
    std::vector<QuadExt> num;
    const int deg = static_cast<int>(gen.integer(0, 6));
    for (int k = 0; k <= deg; ++k) num.push_back(random_element(gen, m));
    const int order = static_cast<int>(gen.integer(1, 5));
    const auto pf = partial_fractions(num, a, b, order);
    for (int j = 0; j < 10; ++j) {
      const Float50 sv = gen.uniform(0.0, 5.0);
      Float50 top = 0;
      for (int k = deg; k >= 0; --k) top = top * sv + num[k].to_float50();
      const Float50 direct = top / pow(a.to_float50() * sv + b.to_float50(), order);
      const Float50 diff = abs(pf.eval_F(sv) - direct);
      CHECK(static_cast<double>(diff) <= 1e-40 * std::max(1.0, static_cast<double>(abs(direct))));
    }
  }
}

TEST_CASE("expanded GGMT integrands") {
  const Dimension d6 = make_dimension(6);
  const auto ref = expand_integrand(d6, 4);
  CHECK(ref.max_pole_order() == 8);
  for (const auto& c : ref.poles) CHECK_FALSE(c.is_zero());
  // rho^7 Q^4 ~ rho^15 / 16^4: the polynomial part in s has degree 2p-1
  CHECK(ref.poly_degree() == 7);
  CHECK(ref.poly.back() == QuadExt::rational(Rational(1, 65536), ref.m));
  CHECK(rel_err(static_cast<double>(ref.eval_integrand(2.0)), susy_integrand(d6, 4, 2.0)) < 1e-10);

  Gen gen(24);
  for (const auto& [n, p] : {std::pair{8, 4}, {9, 4}, {10, 6}, {11, 6}}) {
    const Dimension dim = make_dimension(n - 2);
    const auto e = expand_integrand(dim, p);
    CHECK(e.max_pole_order() == 2 * p);
    for (int k = 0; k < 50; ++k) {
      const double rho = gen.uniform(0.1, 10.0);
      CHECK(rel_err(static_cast<double>(e.eval_integrand(rho)), susy_integrand(dim, p, rho)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(expand_integrand(d6, 3), std::invalid_argument);
  CHECK_THROWS_AS(expand_integrand(make_dimension(10), 4), std::invalid_argument);
}

TEST_CASE("exact and adaptive backends agree") {
  const Dimension d6 = make_dimension(6);
  const auto ref = expand_integrand(d6, 4);
  const auto exact = exact_pf_integrate(ref, 0, Rational(47, 10));
  // mpmath in tests/oracles/derive.py
  CHECK(rel_err(exact.value, 81448.96093993900956421053) < 1e-15);
  REQUIRE(exact.exact.has_value());
  CHECK(exact.exact->value_decimal.rfind("8.14489609399390095642105", 0) == 0);
  CHECK(exact.exact->m == 2);

  const auto adaptive = adaptive_integrate([&](double r) { return susy_integrand(d6, 4, r); }, 0.0, 4.7, 1e-13);
  CHECK(std::abs(adaptive.value - exact.value) <= adaptive.error_bound);
  CHECK(rel_err(adaptive.value, exact.value) < 1e-10);

  // additivity over a split interval
  const auto left = exact_pf_integrate(ref, 0, Rational(2));
  const auto right = exact_pf_integrate(ref, Rational(2), Rational(47, 10));
  CHECK(rel_err(left.value + right.value, exact.value) < 1e-15);
}
