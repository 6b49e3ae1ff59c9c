#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ymflow::linalg {

/// Symmetric tridiagonal matrix: diag of length N, off of length N-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
  /// Gershgorin interval containing the spectrum.
  [[nodiscard]] std::pair<double, double> gershgorin() const;
};

/// Number of eigenvalues strictly below x.
std::size_t sturm_count(const SymTridiagonal& m, double x);

/// k-th smallest eigenvalue (0-based) by Sturm bisection to full precision.
double bisect_eigenvalue(const SymTridiagonal& m, std::size_t k);

/// Unit-norm eigenvector for an eigenvalue estimate.
std::vector<double> inverse_iteration(const SymTridiagonal& m, double lambda, int iterations = 3);

/// General tridiagonal matrix; lower[i] multiplies x[i] in row i+1, upper[i]
/// multiplies x[i+1] in row i.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
};

/// LU factorization with partial pivoting (fill-in on the second superdiagonal).
class TridiagonalLU {
 public:
  TridiagonalLU() = default;
  /// Throws std::runtime_error on an exactly singular matrix.
  explicit TridiagonalLU(Tridiagonal m);

  void solve_in_place(std::span<double> rhs) const;
  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;
  [[nodiscard]] std::size_t size() const noexcept { return d_.size(); }

 private:
  std::vector<double> dl_;
  std::vector<double> d_;
  std::vector<double> du_;
  std::vector<double> du2_;
  std::vector<unsigned char> swapped_;
};

}  // namespace ymflow::linalg
