#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "generators.hpp"
#include "ymflow/model.hpp"
#include "ymflow/spectral.hpp"
#include "ymflow/tridiagonal.hpp"

using namespace ymflow;
using namespace ymflow::spectral;
using ymflow::testing::Gen;
using ymflow::testing::rel_err;

namespace {

// tests/oracles/derive.py: scipy eigh_tridiagonal (LAPACK) on the same
// discretization with the potential rebuilt symbolically, R = 20, N = 1000
constexpr double kLapackN8[] = {-1.0000984771565844, 0.46033522358873696, 1.6023726569066907, 2.690292988762574,
                                3.7546754257140527};
constexpr double kLapackN7[] = {-1.0002668142174589, 0.6339137124087948, 1.7571517287226242, 2.832227595537933,
                                3.887071335204114};

linalg::SymTridiagonal laplacian(std::size_t N) {
  linalg::SymTridiagonal m;
  m.diag.assign(N, 2.0);
  m.off.assign(N - 1, -1.0);
  return m;
}

}  // namespace

TEST_CASE("Sturm bisection on the discrete Laplacian") {
  const std::size_t N = 200;
  const auto m = laplacian(N);
  for (std::size_t k = 0; k < 10; ++k) {
    const double exact = 2.0 - 2.0 * std::cos((k + 1.0) * std::numbers::pi / (N + 1.0));
    CHECK(std::abs(linalg::bisect_eigenvalue(m, k) - exact) < 1e-13);
    CHECK(linalg::sturm_count(m, exact - 1e-9) == k);
    CHECK(linalg::sturm_count(m, exact + 1e-9) == k + 1);
    const auto v = linalg::inverse_iteration(m, linalg::bisect_eigenvalue(m, k));
    const auto mv = m.apply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < N; ++i) res = std::max(res, std::abs(mv[i] - exact * v[i]));
    CHECK(res < 1e-12);
  }
  const auto [lo, hi] = m.gershgorin();
  CHECK(lo <= 0.0);
  CHECK(hi >= 4.0);
}

TEST_CASE("pivoted tridiagonal solves") {
  Gen gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto N = static_cast<std::size_t>(gen.integer(2, 60));
    linalg::Tridiagonal t;
    for (std::size_t i = 0; i < N; ++i) t.diag.push_back(trial % 5 == 0 ? 0.0 : gen.uniform(-2.0, 2.0));
    for (std::size_t i = 0; i + 1 < N; ++i) {
      t.lower.push_back(gen.uniform(-2.0, 2.0));
      t.upper.push_back(gen.uniform(-2.0, 2.0));
    }
    std::vector<double> x(N);
    for (double& v : x) v = gen.uniform(-1.0, 1.0);
    std::vector<double> b(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      b[i] += t.diag[i] * x[i];
      if (i + 1 < N) {
        b[i] += t.upper[i] * x[i + 1];
        b[i + 1] += t.lower[i] * x[i];
      }
    }
    try {
      const linalg::TridiagonalLU lu(t);
      const auto y = lu.solve(b);
      double resid = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        double r = t.diag[i] * y[i] - b[i];
        if (i + 1 < N) r += t.upper[i] * y[i + 1];
        if (i > 0) r += t.lower[i - 1] * y[i - 1];
        resid = std::max(resid, std::abs(r));
      }
      CHECK(resid < 1e-10);
    } catch (const std::runtime_error&) {
      // exactly singular draws are allowed to be rejected
    }
  }
  linalg::Tridiagonal singular{{0.0}, {0.0, 0.0}, {0.0}};
  CHECK_THROWS_AS(linalg::TridiagonalLU{singular}, std::runtime_error);
}

TEST_CASE("discretization") {
  const Dimension d6 = make_dimension(6);
  const RadialGrid grid(20.0, 1000);
  const auto lin = discretize({d6, PotentialKind::Linearized}, grid);
  const auto free = discretize({d6, PotentialKind::Free}, grid);
  for (std::size_t i = 0; i < grid.size(); i += 17) {
    CHECK(lin.matrix.diag[i] - free.matrix.diag[i] ==
          doctest::Approx(-eval_profile(ProfileKind::V, d6, grid.rho(i))).epsilon(1e-10));
  }
  for (double off : lin.matrix.off) CHECK(off == -1.0 / (grid.h() * grid.h()));

  // Dirichlet Laplacian on (0, pi): lowest eigenvalue 1
  const auto zero = discretize([](double) { return 0.0; }, RadialGrid(std::numbers::pi, 1000));
  CHECK(std::abs(eigen_lowest(zero, 1).eigenvalues[0] - 1.0) < 1e-5);
  CHECK_THROWS_AS(discretize([](double) { return NAN; }, grid), std::invalid_argument);
}

TEST_CASE("eigenvalues agree with LAPACK") {
  const RadialGrid grid(20.0, 1000);
  const auto r8 = eigen_lowest(discretize({make_dimension(6), PotentialKind::Linearized}, grid), 5);
  const auto r7 = eigen_lowest(discretize({make_dimension(5), PotentialKind::Linearized}, grid), 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(r8.eigenvalues[k] - kLapackN8[k]) < 1e-10);
    CHECK(std::abs(r7.eigenvalues[k] - kLapackN7[k]) < 1e-10);
    CHECK(r8.residual_norms[k] <= 1e-8);
  }
  CHECK(std::is_sorted(r8.eigenvalues.begin(), r8.eigenvalues.end()));
  CHECK_THROWS_AS(eigen_lowest(discretize({make_dimension(6), PotentialKind::Free}, grid), 11),
                  std::invalid_argument);
  CHECK_THROWS_AS(eigen_lowest(discretize({make_dimension(6), PotentialKind::Free}, RadialGrid(20.0, 400)), 3),
                  std::invalid_argument);
}

TEST_CASE("linearized and partner spectra at reference resolution") {
  const Dimension d6 = make_dimension(6);
  const RadialGrid grid(20.0, 4000);
  const auto lin = eigen_lowest(discretize({d6, PotentialKind::Linearized}, grid), 5);
  CHECK(std::abs(lin.eigenvalues[0] + 1.0) < 5e-3);
  CHECK(lin.eigenvalues[1] > 0.0);
  const auto susy = eigen_lowest(discretize({d6, PotentialKind::Susy}, grid), 5);
  for (double v : susy.eigenvalues) CHECK(v > 0.0);
}

TEST_CASE("Ornstein-Uhlenbeck calibration") {
  for (int d = 5; d <= 9; ++d) {
    const auto r = eigen_extrapolated({make_dimension(d), PotentialKind::Free}, 20.0, 2000, 3);
    REQUIRE(r.extrapolated.has_value());
    for (int k = 0; k < 3; ++k) CHECK(std::abs((*r.extrapolated)[k] - (k + 1.0)) < 1e-3);
    CHECK(r.best() == *r.extrapolated);
  }
}

TEST_CASE("ground state of the half-line operator") {
  for (int n = 7; n <= 11; ++n) {
    CHECK(eigenfunction_residual(make_dimension(n - 2)) <= 1e-9);
  }
  // odd n: gTilde ~ rho^{(n-1)/2} is a polynomial near 0 and the stencil is second order
  const Dimension d5 = make_dimension(5);
  CHECK(std::log10(eigenfunction_residual_fd(d5, 1e-2) / eigenfunction_residual_fd(d5, 1e-3)) > 1.9);
  // even n: the half-integer power limits the first nodes to order 3/2
  const Dimension d6 = make_dimension(6);
  const double order = std::log10(eigenfunction_residual_fd(d6, 1e-2) / eigenfunction_residual_fd(d6, 1e-3));
  CHECK(order > 1.4);
  CHECK(order < 1.6);
  CHECK_THROWS_AS(eigenfunction_residual(d6, 0.0), std::invalid_argument);
}

TEST_CASE("discrete ground state maps to gMode") {
  const Dimension d6 = make_dimension(6);
  const RadialGrid grid(20.0, 4000);
  const auto r = eigen_lowest(discretize({d6, PotentialKind::Linearized}, grid), 1, true);
  REQUIRE(r.eigenvectors.size() == 1);
  const GridFunction u(grid, d6, r.eigenvectors[0]);
  const auto f = halfline_transform(u, HalflineDirection::from_halfline);
  const auto g = GridFunction::sample(grid, d6, [&](double x) { return eval_profile(ProfileKind::gMode, d6, x); });
  const double c = sigma_inner(grid, d6.n, f.values, g.values) / sigma_inner(grid, d6.n, g.values, g.values);
  std::vector<double> diff(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) diff[k] = f.values[k] - c * g.values[k];
  const double dev = std::sqrt(sigma_inner(grid, d6.n, diff, diff) / (c * c * sigma_inner(grid, d6.n, g.values, g.values)));
  CHECK(dev <= 1e-2);
}

TEST_CASE("SUSY isospectrality") {
  const auto iso = susy_isospectrality(make_dimension(6));
  CHECK(iso.pairs.size() == 4);
  CHECK(iso.max_mismatch <= 5e-3);

  const auto free = eigen_lowest(discretize({make_dimension(6), PotentialKind::Free}, RadialGrid(20.0, 1000)), 4);
  std::vector<double> shifted = free.eigenvalues;
  for (double& v : shifted) v += 0.5;
  CHECK(pair_spectra(free.eigenvalues, shifted).max_mismatch > 0.4);
}

TEST_CASE("spectral gap") {
  const Dimension d6 = make_dimension(6);
  const double ref = spectral_gap(d6, 20.0, 4000);
  const double fine = spectral_gap(d6, 25.0, 8000);
  CHECK(ref > 0.0);
  CHECK(rel_err(ref, fine) < 2e-2);
  CHECK(spectral_gap(make_dimension(5)) > 0.0);

  const auto free = eigen_extrapolated({d6, PotentialKind::Free}, 20.0, 2000, 2);
  CHECK(std::abs(free.best()[1] - free.best()[0] - 1.0) < 1e-3);
}

TEST_CASE("eigenvalues decrease with the truncation radius at fixed spacing") {
  const Dimension d6 = make_dimension(6);
  const double h = 0.005;
  std::vector<std::vector<double>> sweep;
  for (double R : {15.0, 20.0, 25.0}) {
    const auto N = static_cast<std::size_t>(std::llround(R / h)) - 1;
    sweep.push_back(eigen_lowest(discretize({d6, PotentialKind::Linearized}, RadialGrid(R, N)), 4).eigenvalues);
  }
  for (int k = 0; k < 4; ++k) {
    CHECK(sweep[1][k] <= sweep[0][k]);
    CHECK(sweep[2][k] <= sweep[1][k]);
    CHECK(std::abs(sweep[2][k] - sweep[1][k]) < 1e-10);
  }
}

TEST_CASE("ground state converges at second order") {
  const Dimension d6 = make_dimension(6);
  std::vector<double> err;
  for (std::size_t N : {1000u, 2001u, 4003u}) {
    err.push_back(std::abs(eigen_lowest(discretize({d6, PotentialKind::Linearized}, RadialGrid(20.0, N)), 1).eigenvalues[0] + 1.0));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.8);
  CHECK(std::log2(err[1] / err[2]) >= 1.8);
}

TEST_CASE("potential names") {
  for (auto k : {PotentialKind::Free, PotentialKind::Linearized, PotentialKind::Susy}) {
    CHECK(parse_potential(to_string(k)) == k);
  }
  CHECK(parse_potential("free") == PotentialKind::Free);
  CHECK(parse_potential("susy") == PotentialKind::Susy);
  CHECK_FALSE(parse_potential("bogus").has_value());
}
