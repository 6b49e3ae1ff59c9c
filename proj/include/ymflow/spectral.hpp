#pragma once

// Half-line Schrodinger operators -u'' + P(rho) u on (0, R) with Dirichlet
// truncation, discretized by second-order central differences.

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ymflow/model.hpp"
#include "ymflow/tridiagonal.hpp"

namespace ymflow::spectral {

enum class PotentialKind {
  Free,        ///< q, the image of -L0
  Linearized,  ///< q - V, the image of -L with L = L0 + V
  Susy,        ///< (n^2-1)/(4 rho^2) + Q
};

std::string_view to_string(PotentialKind kind);
std::optional<PotentialKind> parse_potential(std::string_view text);

struct OperatorSpec {
  Dimension dim;
  PotentialKind kind = PotentialKind::Linearized;
};

double potential(const OperatorSpec& spec, double rho);

struct TridiagonalOperator {
  linalg::SymTridiagonal matrix;
  RadialGrid grid;
};

/// diag = 2/h^2 + P(rho_i), off = -1/h^2. Throws std::invalid_argument when
/// P is not finite at a node.
TridiagonalOperator discretize(const std::function<double(double)>& potential,
                               const RadialGrid& grid);
TridiagonalOperator discretize(const OperatorSpec& spec, const RadialGrid& grid);

struct EigenResult {
  std::vector<double> eigenvalues;
  std::vector<double> residual_norms;
  double R = 0.0;
  std::size_t N = 0;
  /// Richardson combination (4 fine - coarse)/3 with the fine grid at h/2.
  std::optional<std::vector<double>> extrapolated;
  /// Filled only when requested.
  std::vector<std::vector<double>> eigenvectors;

  /// Extrapolated values when present, raw eigenvalues otherwise.
  [[nodiscard]] const std::vector<double>& best() const {
    return extrapolated ? *extrapolated : eigenvalues;
  }
};

/// k lowest eigenvalues (k <= 10, N >= 500) with residuals from inverse
/// iteration.
EigenResult eigen_lowest(const TridiagonalOperator& op, int k, bool keep_vectors = false);

/// Runs N and 2N+1 nodes on (0, R) (exactly halving h) and extrapolates.
EigenResult eigen_extrapolated(const OperatorSpec& spec, double R, std::size_t N, int k);

/// sup over [h, rho_max] of |-g'' + (q - V) g + g| / max(1, g) for g = gTilde
/// with analytic derivatives, sampled every h.
double eigenfunction_residual(const Dimension& dim, double h = 1e-3, double rho_max = 20.0);

/// Same with g'' from centred differences of step h.
double eigenfunction_residual_fd(const Dimension& dim, double h, double rho_max = 20.0);

struct Isospectrality {
  std::vector<std::pair<double, double>> pairs;
  double max_mismatch = 0.0;
};

/// max |x_i - y_i| over the common prefix.
Isospectrality pair_spectra(const std::vector<double>& x, const std::vector<double>& y);

/// Linearized lambda_1..lambda_4 against Susy lambda_0..lambda_3.
Isospectrality susy_isospectrality(const Dimension& dim, double R = 20.0, std::size_t N = 4000,
                                   bool extrapolate = true);

/// Smallest positive eigenvalue of the Linearized operator (extrapolated).
double spectral_gap(const Dimension& dim, double R = 20.0, std::size_t N = 4000);

}  // namespace ymflow::spectral
