#include "omv/lfunctions.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

namespace omv {

namespace {

// relative rounding bound for a handful of operations at 160 digits
const Real& ulp() {
  static const Real u = boost::multiprecision::pow(Real(10), -155);
  return u;
}

Real round_err(const Real& v) { return boost::multiprecision::abs(v) * ulp(); }

Real to_real(const Integer& z) { return Real(z.get_str()); }

Real to_real(const Rational& q) { return to_real(q.get_num()) / to_real(q.get_den()); }

}  // namespace

PrecReal PrecReal::exact(const Rational& q) {
  Real v = to_real(q);
  return {v, round_err(v)};
}

std::string PrecReal::str(int digits) const { return value.str(digits); }

PrecReal operator+(const PrecReal& a, const PrecReal& b) {
  Real v = a.value + b.value;
  return {v, a.error + b.error + round_err(v)};
}

PrecReal operator-(const PrecReal& a, const PrecReal& b) {
  Real v = a.value - b.value;
  return {v, a.error + b.error + round_err(v)};
}

PrecReal operator-(const PrecReal& a) { return {-a.value, a.error}; }

PrecReal operator*(const PrecReal& a, const PrecReal& b) {
  using boost::multiprecision::abs;
  Real v = a.value * b.value;
  return {v, abs(a.value) * b.error + abs(b.value) * a.error + a.error * b.error + round_err(v)};
}

PrecReal operator/(const PrecReal& a, const PrecReal& b) {
  using boost::multiprecision::abs;
  const Real lo = abs(b.value) - b.error;
  if (lo <= 0) throw PrecisionError("division by an interval containing zero");
  Real v = a.value / b.value;
  // |a/b - a'/b'| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
  const Real e = (abs(a.value) * b.error + abs(b.value) * a.error) / (abs(b.value) * lo);
  return {v, e + round_err(v)};
}

PrecReal sqrt(const PrecReal& a) {
  if (a.lower() <= 0) throw PrecisionError("square root of an interval reaching zero");
  Real v = boost::multiprecision::sqrt(a.value);
  // |sqrt(x) - sqrt(y)| <= |x - y| / (sqrt(x) + sqrt(y))
  return {v, a.error / (v + boost::multiprecision::sqrt(a.lower())) + round_err(v)};
}

PrecReal abs(const PrecReal& a) { return {boost::multiprecision::abs(a.value), a.error}; }

PrecReal pow(const PrecReal& a, long e) {
  PrecReal result(Real(1));
  PrecReal base = a;
  bool invert = e < 0;
  unsigned long n = static_cast<unsigned long>(invert ? -e : e);
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return invert ? PrecReal(Real(1)) / result : result;
}

int check_digits(int digits) {
  if (digits < 1 || digits > kMaxDigits)
    throw PrecisionError("requested precision of " + std::to_string(digits) + " digits is outside 1.." +
                         std::to_string(kMaxDigits));
  return digits;
}

PrecReal pi_value() {
  Real p = boost::math::constants::pi<Real>();
  return {p, round_err(p)};
}

int kronecker(const Integer& d, const Integer& n) { return mpz_kronecker(d.get_mpz_t(), n.get_mpz_t()); }

RealChar::RealChar(Integer disc) : disc_(std::move(disc)) {
  if (disc_ == 0) throw Error("character of discriminant 0");
  const Integer a = abs(disc_);
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), disc_.get_mpz_t(), 4);
  // (d | n) is not periodic in n for d = 3 mod 4
  if (r == 3) throw Error("no real character attached to " + disc_.get_str() + " (= 3 mod 4)");
  period_ = (r == 2) ? 4 * a : a;
}

PrecReal hurwitz_zeta(long s, const Rational& a, int digits) {
  check_digits(digits);
  if (s < 2) throw Error("hurwitz_zeta: s must be >= 2");
  if (a <= 0 || a > 1) throw Error("hurwitz_zeta: a must lie in (0, 1]");
  using boost::multiprecision::pow;
  const Real ar = to_real(a);
  // tolerance relative to the leading term a^-s
  const Real lead = pow(ar, -s);
  const Real tol = pow(Real(10), -(digits + 10)) * (lead > 1 ? lead : Real(1));

  const long n_terms = digits + 2 * s + 10;
  Real sum = 0;
  for (long n = 0; n < n_terms; ++n) sum += pow(Real(n) + ar, -s);
  const Real x = Real(n_terms) + ar;
  sum += pow(x, 1 - s) / (s - 1) + pow(x, -s) / 2;

  // sum_j B_2j / (2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
  Real rising = s;  // s(s+1)...(s+2j-2)
  Real fact = 2;    // (2j)!
  Real xpow = pow(x, -s - 1);
  const Real x2 = x * x;
  Real omitted = 0;
  for (int j = 1;; ++j) {
    const Real term = boost::math::bernoulli_b2n<Real>(j) / fact * rising * xpow;
    if (boost::multiprecision::abs(term) < tol) {
      omitted = boost::multiprecision::abs(term);
      break;
    }
    if (j > 1000) throw PrecisionError("hurwitz_zeta: Euler-Maclaurin did not converge");
    sum += term;
    rising *= Real(s + 2 * j - 1) * Real(s + 2 * j);
    fact *= Real(2 * j + 1) * Real(2 * j + 2);
    xpow /= x2;
  }
  const Real err = 2 * omitted + round_err(sum) * Real(4 * n_terms);
  return {sum, err};
}

PrecReal zeta(long s, int digits) { return hurwitz_zeta(s, Rational(1), digits); }

PrecReal dirichlet_l(long s, const RealChar& chi, int digits) {
  check_digits(digits);
  const Integer& m = chi.period();
  if (!m.fits_slong_p() || m > 10000000) throw Error("dirichlet_l: modulus too large");
  const long mm = m.get_si();
  PrecReal sum;
  for (long r = 1; r <= mm; ++r) {
    const int c = chi(Integer(r));
    if (c == 0) continue;
    Rational a(r, mm);
    a.canonicalize();
    const PrecReal h = hurwitz_zeta(s, a, digits);
    sum = c > 0 ? sum + h : sum - h;
  }
  return sum * pow(PrecReal::exact(Rational(m)), -s);
}

PrecReal gamma_half(HalfInt k, int digits) {
  check_digits(digits);
  if (k.twice <= 0) throw Error("gamma_half: argument must be positive");
  if (k.is_integral()) {
    Integer f = 1;
    for (long i = 2; i < k.twice / 2; ++i) f *= i;
    return PrecReal::exact(Rational(f));
  }
  // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
  const long n = (k.twice - 1) / 2;
  Integer num = 1, den = 1;
  for (long i = n + 1; i <= 2 * n; ++i) num *= i;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * n));
  Rational c(num, den);
  c.canonicalize();
  return PrecReal::exact(c) * sqrt(pi_value());
}

}  // namespace omv
