#include "ymflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ymflow::spectral {

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Free: return "free";
    case PotentialKind::Linearized: return "linearized";
    case PotentialKind::Susy: return "susy";
  }
  return "unknown";
}

std::optional<PotentialKind> parse_potential(std::string_view text) {
  if (text == "free") return PotentialKind::Free;
  if (text == "linearized") return PotentialKind::Linearized;
  if (text == "susy") return PotentialKind::Susy;
  return std::nullopt;
}

double potential(const OperatorSpec& spec, double rho) {
  const Dimension& dim = spec.dim;
  switch (spec.kind) {
    case PotentialKind::Free: return eval_profile(ProfileKind::qFree, dim, rho);
    case PotentialKind::Linearized:
      return eval_profile(ProfileKind::qFree, dim, rho) - eval_profile(ProfileKind::V, dim, rho);
    case PotentialKind::Susy: {
      const double n = dim.n;
      return (n * n - 1.0) / (4.0 * rho * rho) + eval_profile(ProfileKind::QSusy, dim, rho);
    }
  }
  throw std::invalid_argument("potential: unknown kind");
}

TridiagonalOperator discretize(const std::function<double(double)>& pot, const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const double h2 = grid.h() * grid.h();
  TridiagonalOperator op{{std::vector<double>(n), std::vector<double>(n > 0 ? n - 1 : 0, -1.0 / h2)},
                         grid};
  for (std::size_t i = 0; i < n; ++i) {
    const double v = pot(grid.rho(i));
    if (!std::isfinite(v)) throw std::invalid_argument("discretize: potential not finite at a node");
    op.matrix.diag[i] = 2.0 / h2 + v;
  }
  return op;
}

TridiagonalOperator discretize(const OperatorSpec& spec, const RadialGrid& grid) {
  return discretize([&spec](double rho) { return potential(spec, rho); }, grid);
}

EigenResult eigen_lowest(const TridiagonalOperator& op, int k, bool keep_vectors) {
  if (k < 1 || k > 10) throw std::invalid_argument("eigen_lowest: need 1 <= k <= 10");
  if (op.grid.size() < 500) throw std::invalid_argument("eigen_lowest: need N >= 500");
  EigenResult out;
  out.R = op.grid.R();
  out.N = op.grid.size();
  for (int j = 0; j < k; ++j) {
    const double lambda = linalg::bisect_eigenvalue(op.matrix, static_cast<std::size_t>(j));
    auto v = linalg::inverse_iteration(op.matrix, lambda);
    const auto mv = op.matrix.apply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res += (mv[i] - lambda * v[i]) * (mv[i] - lambda * v[i]);
    out.eigenvalues.push_back(lambda);
    out.residual_norms.push_back(std::sqrt(res));
    if (keep_vectors) out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

EigenResult eigen_extrapolated(const OperatorSpec& spec, double R, std::size_t N, int k) {
  EigenResult coarse = eigen_lowest(discretize(spec, RadialGrid(R, N)), k);
  const EigenResult fine = eigen_lowest(discretize(spec, RadialGrid(R, 2 * N + 1)), k);
  std::vector<double> ext(coarse.eigenvalues.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    ext[i] = (4.0 * fine.eigenvalues[i] - coarse.eigenvalues[i]) / 3.0;
    coarse.residual_norms[i] = std::max(coarse.residual_norms[i], fine.residual_norms[i]);
  }
  coarse.extrapolated = std::move(ext);
  return coarse;
}

namespace {

double residual_ratio(const Dimension& dim, double rho, double g, double g2) {
  const OperatorSpec spec{dim, PotentialKind::Linearized};
  return std::abs(-g2 + potential(spec, rho) * g + g) / std::max(1.0, std::abs(g));
}

}  // namespace

double eigenfunction_residual(const Dimension& dim, double h, double rho_max) {
  if (!(h > 0.0) || !(rho_max > h)) throw std::invalid_argument("eigenfunction_residual: bad range");
  double worst = 0.0;
  const auto steps = static_cast<std::size_t>(std::floor(rho_max / h));
  for (std::size_t i = 1; i <= steps; ++i) {
    const double rho = static_cast<double>(i) * h;
    const ProfileJet jet = profile_jet(ProfileKind::gTilde, dim, rho);
    worst = std::max(worst, residual_ratio(dim, rho, jet.value, jet.d2));
  }
  return worst;
}

double eigenfunction_residual_fd(const Dimension& dim, double h, double rho_max) {
  if (!(h > 0.0) || !(rho_max > 2.0 * h)) {
    throw std::invalid_argument("eigenfunction_residual_fd: bad range");
  }
  double worst = 0.0;
  const auto steps = static_cast<std::size_t>(std::floor(rho_max / h));
  for (std::size_t i = 1; i < steps; ++i) {
    const double rho = static_cast<double>(i) * h;
    const double gm = eval_profile(ProfileKind::gTilde, dim, rho - h);
    const double g0 = eval_profile(ProfileKind::gTilde, dim, rho);
    const double gp = eval_profile(ProfileKind::gTilde, dim, rho + h);
    worst = std::max(worst, residual_ratio(dim, rho, g0, (gm - 2.0 * g0 + gp) / (h * h)));
  }
  return worst;
}

Isospectrality pair_spectra(const std::vector<double>& x, const std::vector<double>& y) {
  Isospectrality out;
  const std::size_t m = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < m; ++i) {
    out.pairs.emplace_back(x[i], y[i]);
    out.max_mismatch = std::max(out.max_mismatch, std::abs(x[i] - y[i]));
  }
  return out;
}

Isospectrality susy_isospectrality(const Dimension& dim, double R, std::size_t N, bool extrapolate) {
  const OperatorSpec lin{dim, PotentialKind::Linearized};
  const OperatorSpec susy{dim, PotentialKind::Susy};
  std::vector<double> a;
  std::vector<double> b;
  if (extrapolate) {
    a = eigen_extrapolated(lin, R, N, 5).best();
    b = eigen_extrapolated(susy, R, N, 4).best();
  } else {
    a = eigen_lowest(discretize(lin, RadialGrid(R, N)), 5).eigenvalues;
    b = eigen_lowest(discretize(susy, RadialGrid(R, N)), 4).eigenvalues;
  }
  a.erase(a.begin());
  return pair_spectra(a, b);
}

double spectral_gap(const Dimension& dim, double R, std::size_t N) {
  const auto result = eigen_extrapolated({dim, PotentialKind::Linearized}, R, N, 2);
  const double gap = result.best()[1];
  if (!(gap > 0.0)) throw std::runtime_error("spectral_gap: second eigenvalue is not positive");
  return gap;
}

}  // namespace ymflow::spectral
