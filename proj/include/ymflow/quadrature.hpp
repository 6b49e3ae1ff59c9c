#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ymflow::quad {

enum class Method { adaptive, exactPF };

/// x + y sqrt(m) with x, y written as exact rational strings ("p/q").
struct QuadExtRecord {
  std::string x;
  std::string y;
  friend bool operator==(const QuadExtRecord&, const QuadExtRecord&) = default;
};

/// Closed form of an exact partial-fraction integral:
///   value = rational_part + log_coefficient * log(log_arg_num / log_arg_den)
/// with every coefficient in Q(sqrt(m)).
struct ExactForm {
  long long m = 1;
  QuadExtRecord rational_part;
  QuadExtRecord log_coefficient;
  QuadExtRecord log_arg_num;
  QuadExtRecord log_arg_den;
  /// Value printed with 50 significant digits.
  std::string value_decimal;
  friend bool operator==(const ExactForm&, const ExactForm&) = default;
};

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
  Method method = Method::adaptive;
  bool converged = true;
  int subdivisions = 0;
  std::optional<ExactForm> exact;
};

class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, IntegralResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const IntegralResult& partial() const noexcept { return partial_; }

 private:
  IntegralResult partial_;
};

using Integrand = std::function<double(double)>;

struct AdaptiveOptions {
  int max_subdivisions = 4000;
  double abs_tol = 0.0;
  /// Interior points where the integrand has kinks; each becomes an initial
  /// interval boundary.
  std::vector<double> breakpoints;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration. hi may be +infinity.
/// rel_tol must lie in [1e-14, 1e-2]. Throws QuadratureFailure (carrying the
/// partial result) when the tolerance is not met within max_subdivisions.
IntegralResult adaptive_integrate(const Integrand& f, double lo, double hi, double rel_tol,
                                  const AdaptiveOptions& options = {});

/// Gamma function; exact factorial for integer z <= 20. Rejects z <= 0.
double gamma(double z);

}  // namespace ymflow::quad
