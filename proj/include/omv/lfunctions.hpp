#pragma once

#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "omv/arith.hpp"

namespace omv {

/// Working type: 160 significant decimal digits, fixed at compile time.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<160>,
                                           boost::multiprecision::et_off>;

/// Largest number of decimal digits a caller may request.
constexpr int kMaxDigits = 140;
constexpr int kDefaultDigits = 30;

/// Requested precision outside what the working type can certify.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A value together with an absolute error bound.
struct PrecReal {
  Real value = 0;
  Real error = 0;

  PrecReal() = default;
  PrecReal(Real v, Real e = 0) : value(std::move(v)), error(std::move(e)) {}
  static PrecReal exact(const Rational& q);

  Real lower() const { return value - error; }
  Real upper() const { return value + error; }
  /// True if the whole interval lies strictly below x.
  bool below(const Real& x) const { return upper() < x; }
  bool above(const Real& x) const { return lower() > x; }

  /// Decimal string with `digits` significant digits.
  std::string str(int digits = 20) const;
  double to_double() const { return value.convert_to<double>(); }
};

PrecReal operator+(const PrecReal& a, const PrecReal& b);
PrecReal operator-(const PrecReal& a, const PrecReal& b);
PrecReal operator-(const PrecReal& a);
PrecReal operator*(const PrecReal& a, const PrecReal& b);
/// Throws PrecisionError when the divisor interval contains 0.
PrecReal operator/(const PrecReal& a, const PrecReal& b);
PrecReal sqrt(const PrecReal& a);
PrecReal abs(const PrecReal& a);
/// a^e for an integer exponent.
PrecReal pow(const PrecReal& a, long e);

/// Validates a requested digit count and returns it.
int check_digits(int digits);

PrecReal pi_value();

/// Kronecker symbol (d | n).
int kronecker(const Integer& d, const Integer& n);

/// n -> (disc | n). Period |disc| when disc = 0,1 mod 4 and 4|disc| when disc = 2 mod 4;
/// disc = 3 mod 4 is rejected since the symbol is then not periodic in n.
class RealChar {
 public:
  explicit RealChar(Integer disc);
  const Integer& disc() const { return disc_; }
  const Integer& period() const { return period_; }
  int operator()(const Integer& n) const { return kronecker(disc_, n); }

 private:
  Integer disc_;
  Integer period_;
};

/// Riemann zeta at an integer s >= 2, absolute error <= 10^-digits.
PrecReal zeta(long s, int digits = kDefaultDigits);

/// Hurwitz zeta zeta(s, a) for integer s >= 2 and rational 0 < a <= 1 (Euler-Maclaurin).
PrecReal hurwitz_zeta(long s, const Rational& a, int digits = kDefaultDigits);

/// L(s, chi) = m^-s sum_{r=1}^m chi(r) zeta(s, r/m), m the period of chi.
PrecReal dirichlet_l(long s, const RealChar& chi, int digits = kDefaultDigits);

/// Gamma(k) for k a positive integer or half-integer.
PrecReal gamma_half(HalfInt k, int digits = kDefaultDigits);

}  // namespace omv
