#pragma once

// Closed-form constants, profiles and grid functions for the equivariant
// Yang-Mills heat flow
//
//   u_t = u_rr + (d+1)/r u_r + 3(d-2) u^2 - (d-2) r^2 u^3
//
// and its similarity-coordinate form around the shrinker W(rho) = 1/(a rho^2 + b).

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace ymflow {

/// Model constants derived from the space dimension d (n = d + 2 is the
/// dimension in which the radial problem lives).
struct Dimension {
  int d = 0;
  int n = 0;
  double a = 0.0;
  double b = 0.0;
  /// b evaluated from the n-form n(3 - sqrt(2n-8)/2) - 12; agrees with b.
  double b_from_n = 0.0;
  /// |b - b_from_n| / max(|b|, 1e-300), evaluated in extended precision.
  double b_discrepancy = 0.0;
  int kappa0 = 0;
  int kappa1 = 0;
  /// ||g||_{L^2_sigma(R^n)} for g(x) = (a|x|^2 + b)^{-2}; NaN when b <= 0.
  double g_sigma_norm = 0.0;

  /// False for d >= 10 (and d < 5), where the shrinker does not exist.
  [[nodiscard]] bool has_profile() const noexcept { return b > 0.0; }
};

/// Throws std::invalid_argument for d < 3. A non-positive b is flagged via
/// has_profile(), not rejected, so d = 10 remains computable.
Dimension make_dimension(int d);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

/// Uniform half-line grid rho_k = (k+1) h, k = 0..N-1, h = R/(N+1).
/// Excludes both rho = 0 and rho = R.
class RadialGrid {
 public:
  RadialGrid(double R, std::size_t N);

  [[nodiscard]] double R() const noexcept { return R_; }
  [[nodiscard]] std::size_t size() const noexcept { return N_; }
  [[nodiscard]] double h() const noexcept { return h_; }
  [[nodiscard]] double rho(std::size_t k) const noexcept {
    return static_cast<double>(k + 1) * h_;
  }
  [[nodiscard]] std::vector<double> nodes() const;

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

 private:
  double R_;
  std::size_t N_;
  double h_;
};

/// A radial function sampled on a RadialGrid.
struct GridFunction {
  RadialGrid grid;
  Dimension dim;
  std::vector<double> values;

  /// Validates length and finiteness.
  GridFunction(RadialGrid g, Dimension dm, std::vector<double> v);

  static GridFunction zeros(const RadialGrid& g, const Dimension& dm);
  static GridFunction sample(const RadialGrid& g, const Dimension& dm,
                             const std::function<double(double)>& f);

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double rho(std::size_t k) const noexcept { return grid.rho(k); }
};

enum class ProfileKind {
  W,            ///< 1/(a rho^2 + b)
  V,            ///< linearization potential 3(n-4)(2b + (2a-1) rho^2)/(a rho^2 + b)^2
  qFree,        ///< half-line potential of -L0
  QSusy,        ///< nonsingular part Q of the supersymmetric partner potential
  gTilde,       ///< rho^{(n-1)/2} e^{-rho^2/8} (a rho^2 + b)^{-2}
  gMode,        ///< (a rho^2 + b)^{-2} / ||g||_sigma
  sigmaWeight,  ///< e^{-rho^2/4}
};

std::string_view to_string(ProfileKind kind);

/// Closed-form profile value. qFree and QSusy require rho > 0, the others
/// rho >= 0. Throws std::invalid_argument otherwise or for non-finite rho.
double eval_profile(ProfileKind kind, const Dimension& dim, double rho);

/// Value and first two rho-derivatives of a profile.
struct ProfileJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Analytic derivatives; supported kinds: W, gTilde, gMode, sigmaWeight.
ProfileJet profile_jet(ProfileKind kind, const Dimension& dim, double rho);

/// Second derivative of log(gTilde).
double log_gtilde_d2(const Dimension& dim, double rho);

/// f'' + ((d+1)/rho) f' - rho f'/2 - f + 3(d-2) f^2 - (d-2) rho^2 f^3.
double stationary_residual_at(const Dimension& dim, const ProfileJet& f, double rho);

/// Residual of the stationary similarity equation with analytic derivatives.
GridFunction stationary_residual(ProfileKind kind, const RadialGrid& grid,
                                 const Dimension& dim);

/// Residual with second-order centred differences. The origin is closed by
/// the even extension f(0) = (4 f_1 - f_2)/3; the last node uses cubic
/// extrapolation for f(R).
GridFunction stationary_residual(const GridFunction& f);

enum class HalflineDirection { to_halfline, from_halfline };

/// to_halfline: u = |S^{n-1}|^{1/2} rho^{(n-1)/2} e^{-rho^2/8} f, i.e. the
/// inverse of the unitary map L^2(R^+) -> L^2_sigma(R^n). from_halfline
/// undoes it and rejects grids whose first node is below 1e-8.
GridFunction halfline_transform(const GridFunction& f, HalflineDirection direction);

enum class NonlinearForm {
  perturbation,  ///< N(f) for psi = W + f
  absolute,      ///< 3(d-2) f^2 - (d-2) rho^2 f^3
};

double nonlinearity_at(const Dimension& dim, NonlinearForm form, double f, double rho);
GridFunction nonlinearity(const GridFunction& f, NonlinearForm form);

struct Norms {
  double sup = 0.0;
  double sigma_l2 = 0.0;
  double x_proxy = 0.0;
  /// Set when the grid has fewer than 1000 nodes.
  bool x_proxy_low_accuracy = false;
};

Norms norms(const GridFunction& f);

double sup_norm(std::span<const double> values);

/// (f|g)_{L^2_sigma(R^n)} for radial samples on the grid (trapezoid rule;
/// the integrand vanishes at rho = 0 and is negligible at rho = R >= 15).
double sigma_inner(const RadialGrid& grid, int n, std::span<const double> f,
                   std::span<const double> g);

/// (sum over k in {kappa0, kappa1} of ||D^k f||^2_{L^2(R^n)})^{1/2} with D^k
/// built from finite-difference radial Laplacians and one radial derivative
/// for odd k.
double x_proxy_norm(const GridFunction& f);

/// f(0) from the even (regular) extension of grid samples.
double origin_value(std::span<const double> values);

/// Cubic Lagrange interpolation using the even extension across rho = 0 and
/// zero beyond R.
double interpolate_radial(const RadialGrid& grid, std::span<const double> values,
                          double rho);

}  // namespace ymflow
