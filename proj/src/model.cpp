#include "ymflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ymflow/quadrature.hpp"

namespace ymflow {
namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

void require_finite(double rho) {
  if (!std::isfinite(rho)) throw std::invalid_argument("profile: rho must be finite");
}

double q_free(const Dimension& dim, double rho) {
  const double n = dim.n;
  return rho * rho / 16.0 + (n - 3.0) * (n - 1.0) / (4.0 * rho * rho) - (n - 4.0) / 4.0;
}

double q_susy(const Dimension& dim, double rho) {
  const double n = dim.n;
  const double a = dim.a;
  const double b = dim.b;
  const double s = rho * rho;
  const double den = a * s + b;
  const double lin = a * (2.0 * a * (n - 4.0) + b);
  const double cst = b * (2.0 * a * (n - 2.0) + b);
  return s / 16.0 - n / 4.0 + 1.5 - 2.0 * (lin * s + cst) / (den * den);
}

// f at index -1 (rho = 0) and at index N (rho = R) for finite differences.
double at_or_closure(std::span<const double> f, std::ptrdiff_t k) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  if (k < 0) return origin_value(f);
  if (k >= n) {
    return 4.0 * f[n - 1] - 6.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4];
  }
  return f[static_cast<std::size_t>(k)];
}

// Each application drops the last node, whose stencil would reach past R.
std::vector<double> fd_laplacian(std::span<const double> f, double h, int n) {
  const std::size_t m = f.size();
  std::vector<double> out(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double rho = static_cast<double>(k + 1) * h;
    const double left = k == 0 ? origin_value(f) : f[k - 1];
    const double right = f[k + 1];
    out[k] = (left - 2.0 * f[k] + right) / (h * h) + (n - 1.0) / rho * (right - left) / (2.0 * h);
  }
  return out;
}

std::vector<double> fd_gradient(std::span<const double> f, double h) {
  const std::size_t m = f.size();
  std::vector<double> out(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double left = k == 0 ? origin_value(f) : f[k - 1];
    out[k] = (f[k + 1] - left) / (2.0 * h);
  }
  return out;
}

double weighted_l2_squared(std::span<const double> f, double h, int n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double rho = static_cast<double>(k + 1) * h;
    sum += f[k] * f[k] * std::pow(rho, n - 1);
  }
  return sum * h * unit_sphere_area(n);
}

}  // namespace

Dimension make_dimension(int d) {
  if (d < 3) throw std::invalid_argument("make_dimension: d must be at least 3");
  Dimension dim;
  dim.d = d;
  dim.n = d + 2;

  const Float50 two(2);
  const Float50 a = sqrt(Float50(d - 2)) / (2 * sqrt(two));
  const Float50 b = (Float50(6 * d - 12) - Float50(d + 2) * sqrt(Float50(2 * d - 4))) / 2;
  const Float50 b_n = Float50(dim.n) * (3 - sqrt(Float50(2 * dim.n - 8)) / 2) - 12;
  dim.a = static_cast<double>(a);
  dim.b = static_cast<double>(b);
  dim.b_from_n = static_cast<double>(b_n);
  const Float50 scale = std::max(abs(b), Float50(1e-300));
  dim.b_discrepancy = static_cast<double>(abs(b - b_n) / scale);

  dim.kappa0 = dim.n % 2 == 1 ? (dim.n - 3) / 2 : (dim.n - 2) / 2;
  dim.kappa1 = dim.kappa0 + 2;

  if (dim.has_profile()) {
    const double aa = dim.a;
    const double bb = dim.b;
    const int n = dim.n;
    auto integrand = [aa, bb, n](double rho) {
      const double den = aa * rho * rho + bb;
      return std::pow(rho, n - 1) * std::exp(-rho * rho / 4.0) / (den * den * den * den);
    };
    const auto integral = quad::adaptive_integrate(integrand, 0.0, 60.0, 1e-13);
    dim.g_sigma_norm = std::sqrt(unit_sphere_area(n) * integral.value);
  } else {
    dim.g_sigma_norm = std::nan("");
  }
  return dim;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / quad::gamma(0.5 * n);
}

RadialGrid::RadialGrid(double R, std::size_t N) : R_(R), N_(N), h_(0.0) {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("RadialGrid: R must be positive");
  if (N < 4) throw std::invalid_argument("RadialGrid: need at least 4 nodes");
  h_ = R / static_cast<double>(N + 1);
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> out(N_);
  for (std::size_t k = 0; k < N_; ++k) out[k] = rho(k);
  return out;
}

GridFunction::GridFunction(RadialGrid g, Dimension dm, std::vector<double> v)
    : grid(g), dim(dm), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("GridFunction: value count " + std::to_string(values.size()) +
                                " does not match grid size " + std::to_string(grid.size()));
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite value");
  }
}

GridFunction GridFunction::zeros(const RadialGrid& g, const Dimension& dm) {
  return GridFunction(g, dm, std::vector<double>(g.size(), 0.0));
}

GridFunction GridFunction::sample(const RadialGrid& g, const Dimension& dm,
                                  const std::function<double(double)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.rho(k));
  return GridFunction(g, dm, std::move(v));
}

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::W: return "W";
    case ProfileKind::V: return "V";
    case ProfileKind::qFree: return "qFree";
    case ProfileKind::QSusy: return "QSusy";
    case ProfileKind::gTilde: return "gTilde";
    case ProfileKind::gMode: return "gMode";
    case ProfileKind::sigmaWeight: return "sigmaWeight";
  }
  return "unknown";
}

double eval_profile(ProfileKind kind, const Dimension& dim, double rho) {
  require_finite(rho);
  const bool singular = kind == ProfileKind::qFree || kind == ProfileKind::QSusy;
  if (singular ? !(rho > 0.0) : rho < 0.0) {
    throw std::invalid_argument(std::string("eval_profile: rho out of range for ") +
                                std::string(to_string(kind)));
  }
  const double s = rho * rho;
  const double den = dim.a * s + dim.b;
  switch (kind) {
    case ProfileKind::W: return 1.0 / den;
    case ProfileKind::V:
      return 3.0 * (dim.n - 4.0) * (2.0 * dim.b + (2.0 * dim.a - 1.0) * s) / (den * den);
    case ProfileKind::qFree: return q_free(dim, rho);
    case ProfileKind::QSusy: return q_susy(dim, rho);
    case ProfileKind::gTilde:
      return std::pow(rho, 0.5 * (dim.n - 1)) * std::exp(-s / 8.0) / (den * den);
    case ProfileKind::gMode: return 1.0 / (den * den * dim.g_sigma_norm);
    case ProfileKind::sigmaWeight: return std::exp(-s / 4.0);
  }
  throw std::invalid_argument("eval_profile: unknown kind");
}

double log_gtilde_d2(const Dimension& dim, double rho) {
  const double m = 0.5 * (dim.n - 1);
  const double den = dim.a * rho * rho + dim.b;
  return -m / (rho * rho) - 0.25 - 4.0 * dim.a / den +
         8.0 * dim.a * dim.a * rho * rho / (den * den);
}

ProfileJet profile_jet(ProfileKind kind, const Dimension& dim, double rho) {
  require_finite(rho);
  const double a = dim.a;
  const double s = rho * rho;
  const double den = a * s + dim.b;
  switch (kind) {
    case ProfileKind::W: {
      const double w = 1.0 / den;
      return {w, -2.0 * a * rho * w * w, -2.0 * a * w * w + 8.0 * a * a * s * w * w * w};
    }
    case ProfileKind::gMode: {
      const double inv = 1.0 / den;
      const double c = 1.0 / dim.g_sigma_norm;
      return {c * inv * inv, c * (-4.0 * a * rho * inv * inv * inv),
              c * (-4.0 * a * inv * inv * inv + 24.0 * a * a * s * inv * inv * inv * inv)};
    }
    case ProfileKind::gTilde: {
      if (!(rho > 0.0)) throw std::invalid_argument("profile_jet: gTilde needs rho > 0");
      const double m = 0.5 * (dim.n - 1);
      const double g = eval_profile(ProfileKind::gTilde, dim, rho);
      const double l1 = m / rho - rho / 4.0 - 4.0 * a * rho / den;
      const double l2 = log_gtilde_d2(dim, rho);
      return {g, g * l1, g * (l1 * l1 + l2)};
    }
    case ProfileKind::sigmaWeight: {
      const double w = std::exp(-s / 4.0);
      return {w, -0.5 * rho * w, (-0.5 + 0.25 * s) * w};
    }
    default: break;
  }
  throw std::invalid_argument("profile_jet: no analytic derivatives for " +
                              std::string(to_string(kind)));
}

double stationary_residual_at(const Dimension& dim, const ProfileJet& f, double rho) {
  const double dm2 = dim.d - 2.0;
  return f.d2 + (dim.d + 1.0) / rho * f.d1 - 0.5 * rho * f.d1 - f.value +
         3.0 * dm2 * f.value * f.value - dm2 * rho * rho * f.value * f.value * f.value;
}

GridFunction stationary_residual(ProfileKind kind, const RadialGrid& grid, const Dimension& dim) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double rho = grid.rho(k);
    out[k] = stationary_residual_at(dim, profile_jet(kind, dim, rho), rho);
  }
  return GridFunction(grid, dim, std::move(out));
}

GridFunction stationary_residual(const GridFunction& f) {
  const double h = f.grid.h();
  std::span<const double> v(f.values);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    const double left = at_or_closure(v, i - 1);
    const double right = at_or_closure(v, i + 1);
    const ProfileJet jet{v[k], (right - left) / (2.0 * h), (left - 2.0 * v[k] + right) / (h * h)};
    out[k] = stationary_residual_at(f.dim, jet, f.rho(k));
  }
  return GridFunction(f.grid, f.dim, std::move(out));
}

GridFunction halfline_transform(const GridFunction& f, HalflineDirection direction) {
  const double sphere = std::sqrt(unit_sphere_area(f.dim.n));
  const double power = 0.5 * (f.dim.n - 1);
  if (direction == HalflineDirection::from_halfline && f.grid.rho(0) < 1e-8) {
    throw std::invalid_argument("halfline_transform: first node too close to the origin");
  }
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double rho = f.rho(k);
    const double factor = sphere * std::pow(rho, power) * std::exp(-rho * rho / 8.0);
    out[k] = direction == HalflineDirection::to_halfline ? factor * f.values[k]
                                                         : f.values[k] / factor;
  }
  return GridFunction(f.grid, f.dim, std::move(out));
}

double nonlinearity_at(const Dimension& dim, NonlinearForm form, double f, double rho) {
  const double dm2 = dim.d - 2.0;
  const double s = rho * rho;
  if (form == NonlinearForm::absolute) return 3.0 * dm2 * f * f - dm2 * s * f * f * f;
  const double w = 1.0 / (dim.a * s + dim.b);
  return 3.0 * dm2 * (1.0 - s * w) * f * f - dm2 * s * f * f * f;
}

GridFunction nonlinearity(const GridFunction& f, NonlinearForm form) {
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    out[k] = nonlinearity_at(f.dim, form, f.values[k], f.rho(k));
  }
  return GridFunction(f.grid, f.dim, std::move(out));
}

double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

double sigma_inner(const RadialGrid& grid, int n, std::span<const double> f,
                   std::span<const double> g) {
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double rho = grid.rho(k);
    sum += f[k] * g[k] * std::pow(rho, n - 1) * std::exp(-rho * rho / 4.0);
  }
  return sum * grid.h() * unit_sphere_area(n);
}

double origin_value(std::span<const double> values) {
  return (4.0 * values[0] - values[1]) / 3.0;
}

double x_proxy_norm(const GridFunction& f) {
  const double h = f.grid.h();
  const int n = f.dim.n;
  double total = 0.0;
  for (int order : {f.dim.kappa0, f.dim.kappa1}) {
    std::vector<double> current = f.values;
    for (int j = 0; j < order / 2; ++j) current = fd_laplacian(current, h, n);
    if (order % 2 == 1) current = fd_gradient(current, h);
    total += weighted_l2_squared(current, h, n);
  }
  return std::sqrt(total);
}

Norms norms(const GridFunction& f) {
  Norms out;
  out.sup = sup_norm(f.values);
  out.sigma_l2 = std::sqrt(sigma_inner(f.grid, f.dim.n, f.values, f.values));
  out.x_proxy = x_proxy_norm(f);
  out.x_proxy_low_accuracy = f.size() < 1000;
  return out;
}

double interpolate_radial(const RadialGrid& grid, std::span<const double> values, double rho) {
  const double h = grid.h();
  const auto count = static_cast<std::ptrdiff_t>(values.size());
  const double origin = origin_value(values);
  // Node j sits at j*h; j = 0 is the origin, negative j mirror positive ones.
  auto node = [&](std::ptrdiff_t j) {
    if (j < 0) j = -j;
    if (j == 0) return origin;
    if (j > count) return 0.0;
    return values[static_cast<std::size_t>(j - 1)];
  };
  const double x = std::abs(rho) / h;
  const auto j0 = static_cast<std::ptrdiff_t>(std::floor(x));
  if (j0 > count) return 0.0;
  const double t = x - static_cast<double>(j0);
  const double fm = node(j0 - 1);
  const double f0 = node(j0);
  const double f1 = node(j0 + 1);
  const double f2 = node(j0 + 2);
  // Cubic Lagrange through t = -1, 0, 1, 2.
  return -t * (t - 1.0) * (t - 2.0) / 6.0 * fm + (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 * f0 -
         (t + 1.0) * t * (t - 2.0) / 2.0 * f1 + (t + 1.0) * t * (t - 1.0) / 6.0 * f2;
}

}  // namespace ymflow
