#pragma once

// Exact partial-fraction integration of odd rational functions
//
//   rho * F(rho^2),  F(s) = sum_k c_k s^k + sum_{i>=1} b_i / (a s + b)^i
//
// with all coefficients in the quadratic field Q(sqrt(m)).

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "ymflow/model.hpp"
#include "ymflow/quadrature.hpp"

namespace ymflow::quad {

using Rational = boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

/// "p/q" (or "p" for integers).
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);

/// An element x + y sqrt(m) of Q(sqrt(m)), m square-free and positive. For
/// m = 1 the field is Q and y is folded into x.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(Rational x, Rational y, long long m);
  static QuadExt rational(Rational x, long long m) { return {std::move(x), Rational(0), m}; }

  [[nodiscard]] const Rational& x() const noexcept { return x_; }
  [[nodiscard]] const Rational& y() const noexcept { return y_; }
  [[nodiscard]] long long m() const noexcept { return m_; }
  [[nodiscard]] bool is_zero() const { return x_ == 0 && y_ == 0; }

  [[nodiscard]] QuadExt conjugate() const { return {x_, -y_, m_}; }
  /// x^2 - m y^2, the field norm.
  [[nodiscard]] Rational norm() const { return x_ * x_ - Rational(m_) * y_ * y_; }
  [[nodiscard]] QuadExt inverse() const;
  [[nodiscard]] QuadExt pow(unsigned e) const;

  [[nodiscard]] Float50 to_float50() const;
  [[nodiscard]] double to_double() const { return static_cast<double>(to_float50()); }
  [[nodiscard]] QuadExtRecord record() const { return {to_string(x_), to_string(y_)}; }
  static QuadExt from_record(const QuadExtRecord& rec, long long m);

  friend QuadExt operator+(const QuadExt& u, const QuadExt& v);
  friend QuadExt operator-(const QuadExt& u, const QuadExt& v);
  friend QuadExt operator*(const QuadExt& u, const QuadExt& v);
  friend QuadExt operator/(const QuadExt& u, const QuadExt& v);
  friend QuadExt operator-(const QuadExt& u) { return {-u.x_, -u.y_, u.m_}; }
  friend bool operator==(const QuadExt& u, const QuadExt& v) {
    return u.m_ == v.m_ && u.x_ == v.x_ && u.y_ == v.y_;
  }

 private:
  Rational x_{0};
  Rational y_{0};
  long long m_ = 1;
};

/// value = k^2 m with m square-free; returns {k, m}.
std::pair<long long, long long> square_free_split(long long value);

/// F(s) = sum_k poly[k] s^k + sum_i poles[i-1] / (a s + b)^i.
struct RationalEvenFunction {
  long long m = 1;
  QuadExt a;
  QuadExt b;
  std::vector<QuadExt> poly;
  std::vector<QuadExt> poles;

  [[nodiscard]] Float50 eval_F(const Float50& s) const;
  /// rho * F(rho^2).
  [[nodiscard]] Float50 eval_integrand(const Float50& rho) const;
  /// Highest pole order with a nonzero coefficient (0 if none).
  [[nodiscard]] int max_pole_order() const;
  /// Degree of the polynomial part (-1 if zero).
  [[nodiscard]] int poly_degree() const;
};

/// Exact decomposition of numerator(s) / (a s + b)^order. numerator holds
/// ascending coefficients in s.
RationalEvenFunction partial_fractions(const std::vector<QuadExt>& numerator, const QuadExt& a,
                                       const QuadExt& b, int order);

/// Model constants a, b as exact elements of Q(sqrt(2d-4)).
std::pair<QuadExt, QuadExt> exact_profile_constants(const Dimension& dim);

/// Ascending s-coefficients of the numerator of Q: Q = N_Q(s) / (a s + b)^2.
std::vector<QuadExt> susy_numerator(const Dimension& dim);

/// Decomposition of rho^{2p-1} Q(rho)^p / rho. Requires even p >= 2 and
/// b > 0; throws std::invalid_argument otherwise.
RationalEvenFunction expand_integrand(const Dimension& dim, int p);

/// Integral of rho * F(rho^2) over [lo, hi] from closed-form
/// antiderivatives; the value is evaluated with 50 significant digits.
IntegralResult exact_pf_integrate(const RationalEvenFunction& ref, const Rational& lo,
                                  const Rational& hi);

}  // namespace ymflow::quad
