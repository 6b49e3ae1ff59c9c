#include "ymflow/exact_pf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ymflow::quad {
namespace {

using Poly = std::vector<QuadExt>;

void check_same_field(const QuadExt& u, const QuadExt& v) {
  if (u.m() != v.m()) throw std::invalid_argument("QuadExt: operands from different fields");
}

// (lin_1 s + lin_0) * p
Poly multiply_linear(const Poly& p, const QuadExt& lin1, const QuadExt& lin0) {
  const long long m = lin1.m();
  Poly out(p.size() + 1, QuadExt::rational(0, m));
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] = out[k] + lin0 * p[k];
    out[k + 1] = out[k + 1] + lin1 * p[k];
  }
  return out;
}

Poly multiply(const Poly& p, const Poly& q) {
  const long long m = p.front().m();
  Poly out(p.size() + q.size() - 1, QuadExt::rational(0, m));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] = out[i + j] + p[i] * q[j];
  }
  return out;
}

QuadExt horner(const Poly& p, const QuadExt& s) {
  QuadExt acc = QuadExt::rational(0, s.m());
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc;
}

QuadExtRecord zero_record() { return {"0", "0"}; }

}  // namespace

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  std::ostringstream out;
  out << num;
  if (den != 1) out << '/' << den;
  return out.str();
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  using boost::multiprecision::cpp_int;
  if (slash == std::string::npos) return Rational(cpp_int(text));
  return Rational(cpp_int(text.substr(0, slash)), cpp_int(text.substr(slash + 1)));
}

std::pair<long long, long long> square_free_split(long long value) {
  if (value <= 0) throw std::invalid_argument("square_free_split: value must be positive");
  long long k = 1;
  long long m = value;
  for (long long f = 2; f * f <= m; ++f) {
    while (m % (f * f) == 0) {
      m /= f * f;
      k *= f;
    }
  }
  return {k, m};
}

QuadExt::QuadExt(Rational x, Rational y, long long m) : x_(std::move(x)), y_(std::move(y)), m_(m) {
  if (m <= 0) throw std::invalid_argument("QuadExt: m must be positive");
  if (square_free_split(m).first != 1) throw std::invalid_argument("QuadExt: m must be square-free");
  if (m_ == 1) {
    x_ += y_;
    y_ = 0;
  }
}

QuadExt QuadExt::inverse() const {
  const Rational nrm = norm();
  if (nrm == 0) throw std::domain_error("QuadExt: division by zero");
  return {x_ / nrm, -y_ / nrm, m_};
}

QuadExt QuadExt::pow(unsigned e) const {
  QuadExt result = rational(1, m_);
  QuadExt base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

Float50 QuadExt::to_float50() const {
  const Float50 xf = Float50(boost::multiprecision::numerator(x_)) /
                     Float50(boost::multiprecision::denominator(x_));
  if (y_ == 0) return xf;
  const Float50 yf = Float50(boost::multiprecision::numerator(y_)) /
                     Float50(boost::multiprecision::denominator(y_));
  return xf + yf * sqrt(Float50(m_));
}

QuadExt QuadExt::from_record(const QuadExtRecord& rec, long long m) {
  return {parse_rational(rec.x), parse_rational(rec.y), m};
}

QuadExt operator+(const QuadExt& u, const QuadExt& v) {
  check_same_field(u, v);
  return {u.x_ + v.x_, u.y_ + v.y_, u.m_};
}

QuadExt operator-(const QuadExt& u, const QuadExt& v) {
  check_same_field(u, v);
  return {u.x_ - v.x_, u.y_ - v.y_, u.m_};
}

QuadExt operator*(const QuadExt& u, const QuadExt& v) {
  check_same_field(u, v);
  return {u.x_ * v.x_ + Rational(u.m_) * u.y_ * v.y_, u.x_ * v.y_ + u.y_ * v.x_, u.m_};
}

QuadExt operator/(const QuadExt& u, const QuadExt& v) { return u * v.inverse(); }

Float50 RationalEvenFunction::eval_F(const Float50& s) const {
  Float50 acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * s + it->to_float50();
  const Float50 t = a.to_float50() * s + b.to_float50();
  const Float50 inv = 1 / t;
  Float50 power = inv;
  for (const auto& c : poles) {
    acc += c.to_float50() * power;
    power *= inv;
  }
  return acc;
}

Float50 RationalEvenFunction::eval_integrand(const Float50& rho) const {
  return rho * eval_F(rho * rho);
}

int RationalEvenFunction::max_pole_order() const {
  for (int i = static_cast<int>(poles.size()); i >= 1; --i) {
    if (!poles[static_cast<std::size_t>(i - 1)].is_zero()) return i;
  }
  return 0;
}

int RationalEvenFunction::poly_degree() const {
  for (int k = static_cast<int>(poly.size()) - 1; k >= 0; --k) {
    if (!poly[static_cast<std::size_t>(k)].is_zero()) return k;
  }
  return -1;
}

RationalEvenFunction partial_fractions(const Poly& numerator, const QuadExt& a, const QuadExt& b,
                                       int order) {
  if (numerator.empty()) throw std::invalid_argument("partial_fractions: empty numerator");
  if (a.is_zero()) throw std::invalid_argument("partial_fractions: a must be nonzero");
  if (order < 0) throw std::invalid_argument("partial_fractions: negative order");
  const long long m = a.m();

  // Rewrite numerator in t = a s + b, i.e. s = (t - b)/a.
  const QuadExt inv_a = a.inverse();
  const QuadExt shift = -(b * inv_a);
  Poly in_t{QuadExt::rational(0, m)};
  for (auto it = numerator.rbegin(); it != numerator.rend(); ++it) {
    in_t = multiply_linear(in_t, inv_a, shift);
    in_t[0] = in_t[0] + *it;
  }

  RationalEvenFunction out;
  out.m = m;
  out.a = a;
  out.b = b;
  const auto K = static_cast<std::size_t>(order);
  out.poles.assign(K, QuadExt::rational(0, m));
  for (std::size_t i = 1; i <= K; ++i) {
    if (K - i < in_t.size()) out.poles[i - 1] = in_t[K - i];
  }
  // Polynomial part: sum_j in_t[K + j] t^j, expanded back in s.
  Poly poly{QuadExt::rational(0, m)};
  for (std::size_t j = in_t.size(); j-- > K;) {
    poly = multiply_linear(poly, a, b);
    poly[0] = poly[0] + in_t[j];
  }
  while (poly.size() > 1 && poly.back().is_zero()) poly.pop_back();
  out.poly = std::move(poly);
  return out;
}

std::pair<QuadExt, QuadExt> exact_profile_constants(const Dimension& dim) {
  // sqrt(2d - 4) = k sqrt(m); a = sqrt(2d-4)/4, b = (6d - 12 - (d+2) sqrt(2d-4))/2.
  const auto [k, m] = square_free_split(2LL * dim.d - 4);
  const QuadExt a(Rational(0), Rational(k, 4), m);
  const QuadExt b(Rational(3LL * dim.d - 6), Rational(-(dim.d + 2LL) * k, 2), m);
  return {a, b};
}

std::vector<QuadExt> susy_numerator(const Dimension& dim) {
  const auto [a, b] = exact_profile_constants(dim);
  const long long m = a.m();
  const auto c = [m](Rational r) { return QuadExt::rational(std::move(r), m); };
  const QuadExt n = c(dim.n);
  const QuadExt lin = a * (c(2) * a * (n - c(4)) + b);
  const QuadExt cst = b * (c(2) * a * (n - c(2)) + b);
  // (s/16 + 3/2 - n/4) (a s + b)^2 - 2 (lin s + cst)
  const Poly outer{c(Rational(3, 2)) - n * c(Rational(1, 4)), c(Rational(1, 16))};
  const Poly den{b, a};
  Poly num = multiply(outer, multiply(den, den));
  num[0] = num[0] - c(2) * cst;
  num[1] = num[1] - c(2) * lin;
  return num;
}

RationalEvenFunction expand_integrand(const Dimension& dim, int p) {
  if (p < 2 || p % 2 != 0) {
    throw std::invalid_argument("expand_integrand: p must be an even integer >= 2");
  }
  if (!dim.has_profile()) throw std::invalid_argument("expand_integrand: requires b > 0");
  const auto [a, b] = exact_profile_constants(dim);
  const long long m = a.m();
  const Poly nq = susy_numerator(dim);
  // s^{p-1} N_Q(s)^p / (a s + b)^{2p}
  Poly num(static_cast<std::size_t>(p), QuadExt::rational(0, m));
  num.back() = QuadExt::rational(1, m);
  for (int j = 0; j < p; ++j) num = multiply(num, nq);
  return partial_fractions(num, a, b, 2 * p);
}

IntegralResult exact_pf_integrate(const RationalEvenFunction& ref, const Rational& lo,
                                  const Rational& hi) {
  if (lo < 0 || hi < lo) throw std::invalid_argument("exact_pf_integrate: need 0 <= lo <= hi");
  const long long m = ref.m;
  const auto c = [m](Rational r) { return QuadExt::rational(std::move(r), m); };

  // Antiderivative in s without the logarithmic term.
  auto rational_antiderivative = [&](const Rational& s_value) {
    const QuadExt s = c(s_value);
    Poly integrated{c(0)};
    for (std::size_t k = 0; k < ref.poly.size(); ++k) {
      integrated.push_back(ref.poly[k] * c(Rational(1, static_cast<long long>(k + 1))));
    }
    QuadExt total = horner(integrated, s);
    const QuadExt t = ref.a * s + ref.b;
    if (t.norm() == 0) throw std::domain_error("exact_pf_integrate: pole inside the interval");
    for (std::size_t i = 2; i <= ref.poles.size(); ++i) {
      const QuadExt& bi = ref.poles[i - 1];
      if (bi.is_zero()) continue;
      const auto e = static_cast<unsigned>(i - 1);
      total = total + bi / (ref.a * c(Rational(1 - static_cast<long long>(i))) * t.pow(e));
    }
    return total;
  };

  const Rational s_lo = lo * lo;
  const Rational s_hi = hi * hi;
  const QuadExt half = c(Rational(1, 2));
  const QuadExt rational_part =
      half * (rational_antiderivative(s_hi) - rational_antiderivative(s_lo));

  ExactForm form;
  form.m = m;
  form.rational_part = rational_part.record();
  Float50 value = rational_part.to_float50();
  if (!ref.poles.empty() && !ref.poles[0].is_zero()) {
    const QuadExt log_coefficient = half * ref.poles[0] / ref.a;
    const QuadExt arg_num = ref.a * c(s_hi) + ref.b;
    const QuadExt arg_den = ref.a * c(s_lo) + ref.b;
    const Float50 num_f = arg_num.to_float50();
    const Float50 den_f = arg_den.to_float50();
    if (!(num_f > 0 && den_f > 0)) {
      throw std::domain_error("exact_pf_integrate: a s + b must stay positive on the interval");
    }
    value += log_coefficient.to_float50() * log(num_f / den_f);
    form.log_coefficient = log_coefficient.record();
    form.log_arg_num = arg_num.record();
    form.log_arg_den = arg_den.record();
  } else {
    form.log_coefficient = zero_record();
    form.log_arg_num = {"1", "0"};
    form.log_arg_den = {"1", "0"};
  }
  form.value_decimal = value.str(50, std::ios_base::scientific);

  IntegralResult out;
  out.method = Method::exactPF;
  out.value = static_cast<double>(value);
  out.error_bound = static_cast<double>(abs(value)) * 1e-45;
  out.converged = true;
  out.subdivisions = 0;
  out.exact = std::move(form);
  return out;
}

}  // namespace ymflow::quad
