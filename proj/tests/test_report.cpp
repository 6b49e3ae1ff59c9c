#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "generators.hpp"
#include "ymflow/report.hpp"

using namespace ymflow;
using namespace ymflow::report;
using ymflow::testing::Gen;

namespace {

void check_same(const quad::IntegralResult& a, const quad::IntegralResult& b) {
  CHECK(a.value == b.value);
  CHECK(a.error_bound == b.error_bound);
  CHECK(a.method == b.method);
  CHECK(a.converged == b.converged);
  CHECK(a.subdivisions == b.subdivisions);
  CHECK(a.exact == b.exact);
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / "ymflow_test_report" / name;
}

}  // namespace

TEST_CASE("doubles survive JSON exactly") {
  Gen gen(71);
  for (int k = 0; k < 500; ++k) {
    const double x = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.uniform(-300.0, 300.0));
    const json j = json::parse(json{{"x", number(x)}}.dump());
    CHECK(to_double(j["x"]) == x);
  }
  CHECK(std::isnan(to_double(json::parse(json(number(NAN)).dump()))));
  CHECK(to_double(json::parse(json(number(INFINITY)).dump())) == INFINITY);
  CHECK(to_double(json::parse(json(number(-INFINITY)).dump())) == -INFINITY);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("GGMT reports round trip") {
  for (auto pathway : {ggmt::Pathway::paperOverestimate, ggmt::Pathway::tightQminus, ggmt::Pathway::exactCertificate}) {
    const auto r = ggmt::compute_B(make_dimension(6), 4, pathway);
    const auto back = ggmt_from_json(json::parse(to_json(r).dump()));
    CHECK(back.n == r.n);
    CHECK(back.p == r.p);
    CHECK(back.alpha == r.alpha);
    CHECK(back.rho_star == r.rho_star);
    CHECK(back.upper_limit == r.upper_limit);
    CHECK(back.upper_limit_exact == r.upper_limit_exact);
    CHECK(back.constant == r.constant);
    CHECK(back.B == r.B);
    CHECK(back.passes == r.passes);
    CHECK(back.pathway == r.pathway);
    check_same(back.integral, r.integral);
    CHECK(to_json(back).dump() == to_json(r).dump());
  }
}

TEST_CASE("exact forms round trip") {
  const auto ref = quad::expand_integrand(make_dimension(7), 4);
  const auto r = quad::exact_pf_integrate(ref, 0, quad::Rational(51, 10));
  REQUIRE(r.exact.has_value());
  CHECK(exact_form_from_json(json::parse(to_json(*r.exact).dump())) == *r.exact);
  check_same(integral_from_json(json::parse(to_json(r).dump())), r);
}

TEST_CASE("certificate contents") {
  const Dimension d6 = make_dimension(6);
  const auto ref = quad::expand_integrand(d6, 4);
  const auto r = quad::exact_pf_integrate(ref, 0, quad::Rational(47, 10));
  const json c = certificate(ref, 0, quad::Rational(47, 10), r);
  CHECK(c["m"] == 2);
  CHECK(c["poly_coeffs"].size() == ref.poly.size());
  CHECK(c["pole_coeffs"].size() == 8);
  CHECK(c["interval"][1] == "47/10");
  CHECK(c["value_decimal"].get<std::string>().rfind("8.14489609399390095642105", 0) == 0);
  // coefficients reconstruct the integrand
  quad::RationalEvenFunction rebuilt;
  rebuilt.m = 2;
  rebuilt.a = ref.a;
  rebuilt.b = ref.b;
  for (const auto& e : c["poly_coeffs"]) {
    rebuilt.poly.push_back(quad::QuadExt::from_record({e["x"], e["y"]}, 2));
  }
  for (const auto& e : c["pole_coeffs"]) {
    rebuilt.poles.push_back(quad::QuadExt::from_record({e["coefficient"]["x"], e["coefficient"]["y"]}, 2));
  }
  CHECK(quad::exact_pf_integrate(rebuilt, 0, quad::Rational(47, 10)).exact == r.exact);
}

TEST_CASE("eigen results round trip") {
  const auto r = spectral::eigen_extrapolated({make_dimension(6), spectral::PotentialKind::Susy}, 20.0, 600, 4);
  const auto back = eigen_from_json(json::parse(to_json(r).dump()));
  CHECK(back.eigenvalues == r.eigenvalues);
  CHECK(back.residual_norms == r.residual_norms);
  CHECK(back.R == r.R);
  CHECK(back.N == r.N);
  CHECK(back.extrapolated == r.extrapolated);

  auto plain = r;
  plain.extrapolated.reset();
  CHECK_FALSE(eigen_from_json(json::parse(to_json(plain).dump())).extrapolated.has_value());
}

TEST_CASE("trace CSV") {
  evolve::SolverConfig cfg;
  cfg.dim = make_dimension(6);
  cfg.grid = RadialGrid(20.0, 500);
  cfg.tau_max = 1.0;
  const auto trace = evolve::run_similarity([](double r) { return 1e-2 * std::exp(-r * r); }, 1.01, cfg);
  const std::string csv = trace_csv(trace);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == trace.size() + 1);
  CHECK(csv.rfind("tau,sup,sigma,xproxy,c1\n", 0) == 0);
  const auto back = trace_from_csv(csv);
  CHECK(back.tau == trace.tau);
  CHECK(back.sup == trace.sup);
  CHECK(back.sigma == trace.sigma);
  CHECK(back.x_proxy == trace.x_proxy);
  CHECK(back.c1 == trace.c1);
}

TEST_CASE("JSON lines") {
  CHECK(json_lines({}).empty());
  CHECK(parse_json_lines("").empty());
  CHECK(parse_json_lines("\n\n").empty());
  const std::vector<json> recs{{{"a", 1}}, {{"b", "x"}}};
  CHECK(parse_json_lines(json_lines(recs)) == recs);
  CHECK_THROWS(parse_json_lines("{not json}\n"));
}

TEST_CASE("file output") {
  const auto path = scratch("nested/dir/out.txt");
  std::filesystem::remove_all(scratch(""));
  write_text(path, "hello\n");
  CHECK(read_text(path) == "hello\n");
  write_text(scratch("empty.jsonl"), json_lines({}));
  CHECK(read_text(scratch("empty.jsonl")).empty());

  const auto blocked = scratch("file_not_dir");
  write_text(blocked, "x");
  try {
    write_text(blocked / "child.txt", "y");
    FAIL("expected failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("file_not_dir") != std::string::npos);
  }
  try {
    (void)read_text(scratch("missing.txt"));
    FAIL("expected failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
  }
  std::filesystem::remove_all(scratch(""));
}

TEST_CASE("identical inputs give identical JSON") {
  const auto a = to_json(ggmt::compute_B(make_dimension(7), 6, ggmt::Pathway::exactCertificate)).dump();
  const auto b = to_json(ggmt::compute_B(make_dimension(7), 6, ggmt::Pathway::exactCertificate)).dump();
  CHECK(a == b);
}
