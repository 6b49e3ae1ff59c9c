#include "ymflow/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace ymflow::quad {
namespace {

// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point
// weights sit on the odd Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

Segment gauss_kronrod(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

IntegralResult summarize(std::vector<Segment> segments, bool converged) {
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  IntegralResult out;
  out.method = Method::adaptive;
  out.converged = converged;
  out.subdivisions = static_cast<int>(segments.size());
  for (const auto& s : segments) {
    out.value += s.value;
    out.error_bound += s.error;
  }
  return out;
}

}  // namespace

IntegralResult adaptive_integrate(const Integrand& f, double lo, double hi, double rel_tol,
                                  const AdaptiveOptions& options) {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2)) {
    throw std::invalid_argument("adaptive_integrate: rel_tol must lie in [1e-14, 1e-2]");
  }
  if (!std::isfinite(lo) || std::isnan(hi) || !(lo < hi)) {
    throw std::invalid_argument("adaptive_integrate: need finite lo < hi");
  }

  // Semi-infinite range: x = lo + t/(1-t), t in [0, 1).
  Integrand mapped;
  double a = lo;
  double b = hi;
  std::vector<double> cuts;
  if (std::isinf(hi)) {
    mapped = [&f, lo](double t) {
      if (t >= 1.0) return 0.0;
      const double s = 1.0 - t;
      const double value = f(lo + t / s);
      return std::isfinite(value) ? value / (s * s) : 0.0;
    };
    a = 0.0;
    b = 1.0;
    for (double x : options.breakpoints) {
      if (x > lo) cuts.push_back((x - lo) / (1.0 + x - lo));
    }
  } else {
    mapped = f;
    for (double x : options.breakpoints) {
      if (x > lo && x < hi) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  double total = 0.0;
  double total_error = 0.0;
  double left = a;
  cuts.push_back(b);
  for (double right : cuts) {
    Segment s = gauss_kronrod(mapped, left, right);
    total += s.value;
    total_error += s.error;
    heap.push(s);
    left = right;
  }

  auto drain = [&heap]() {
    std::vector<Segment> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
      all.push_back(heap.top());
      heap.pop();
    }
    return all;
  };

  while (total_error > std::max(options.abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= options.max_subdivisions) {
      auto partial = summarize(drain(), false);
      throw QuadratureFailure("adaptive_integrate: subdivision limit reached", partial);
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 64.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(std::abs(worst.lo), std::abs(worst.hi))) {
      // Round-off limited: accept when what remains is at rounding level.
      if (worst.error <= 1e-13 * std::abs(total) || worst.error == 0.0) break;
      auto partial = summarize(drain(), false);
      throw QuadratureFailure("adaptive_integrate: interval too small to subdivide", partial);
    }
    heap.pop();
    const Segment l = gauss_kronrod(mapped, worst.lo, mid);
    const Segment r = gauss_kronrod(mapped, mid, worst.hi);
    total += l.value + r.value - worst.value;
    total_error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }
  return summarize(drain(), true);
}

double gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::invalid_argument("gamma: argument must be positive and finite");
  }
  if (z <= 21.0 && z == std::floor(z)) {
    double factorial = 1.0;
    for (int k = 2; k < static_cast<int>(z); ++k) factorial *= k;
    return factorial;
  }
  return std::tgamma(z);
}

}  // namespace ymflow::quad
