#include "ymflow/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ymflow::linalg {

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::pair<double, double> SymTridiagonal::gershgorin() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

std::size_t sturm_count(const SymTridiagonal& m, double x) {
  const std::size_t n = m.size();
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : m.off[i - 1] * m.off[i - 1];
    q = m.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const SymTridiagonal& m, std::size_t k) {
  if (k >= m.size()) throw std::invalid_argument("bisect_eigenvalue: k out of range");
  auto [lo, hi] = m.gershgorin();
  const double span = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * span + 1e-300;
  hi += 1e-12 * span + 1e-300;
  if (sturm_count(m, lo) > k || sturm_count(m, hi) <= k) {
    throw std::runtime_error("bisect_eigenvalue: bracket does not contain the eigenvalue");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (sturm_count(m, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration(const SymTridiagonal& m, double lambda, int iterations) {
  const std::size_t n = m.size();
  Tridiagonal shifted{m.off, m.diag, m.off};
  const auto [glo, ghi] = m.gershgorin();
  const double scale = std::max(std::abs(glo), std::abs(ghi));
  // Nudge the shift so the factorization is never exactly singular.
  const double nudge = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (auto& v : shifted.diag) v -= lambda + nudge;
  const TridiagonalLU lu(std::move(shifted));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  for (int it = 0; it < iterations; ++it) {
    lu.solve_in_place(x);
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
  }
  // Fix the sign so the largest component is positive.
  const auto big = std::max_element(x.begin(), x.end(),
                                    [](double u, double v) { return std::abs(u) < std::abs(v); });
  if (*big < 0.0) {
    for (double& v : x) v = -v;
  }
  return x;
}

TridiagonalLU::TridiagonalLU(Tridiagonal m)
    : dl_(std::move(m.lower)), d_(std::move(m.diag)), du_(std::move(m.upper)) {
  const std::size_t n = d_.size();
  if (n == 0 || dl_.size() + 1 != n || du_.size() + 1 != n) {
    throw std::invalid_argument("TridiagonalLU: inconsistent band lengths");
  }
  du2_.assign(n > 2 ? n - 2 : 0, 0.0);
  swapped_.assign(n > 1 ? n - 1 : 0, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] != 0.0) {
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      }
    } else {
      const double fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const double temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      swapped_[i] = 1;
    }
  }
  for (double v : d_) {
    if (v == 0.0) throw std::runtime_error("TridiagonalLU: singular matrix");
  }
}

void TridiagonalLU::solve_in_place(std::span<double> b) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw std::invalid_argument("TridiagonalLU: rhs length mismatch");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped_[i] == 0) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl_[i] * b[i];
    }
  }
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (std::size_t i = n > 2 ? n - 2 : 0; i-- > 0;) {
    b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }
}

std::vector<double> TridiagonalLU::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

}  // namespace ymflow::linalg
