#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "omv/matrix.hpp"

namespace omv {

/// Distinct prime divisors of |n| in increasing order (trial division; n is desk-sized).
std::vector<long> prime_factors(const Integer& n);

bool is_prime(long n);

/// Largest e with p^e | n (n != 0).
int valuation(const Integer& n, long p);

Integer lcm(const Integer& a, const Integer& b);

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Half-integer stored as twice its value; the weights k = rank/2 live here.
struct HalfInt {
  long twice = 0;
  bool is_integral() const { return twice % 2 == 0; }
  /// floor(k)
  long floor() const { return twice >= 0 ? twice / 2 : -((-twice + 1) / 2); }
  Rational value() const { return Rational(twice, 2); }
  bool operator==(const HalfInt&) const = default;
};

std::string to_string(HalfInt k);

/// p^e for e >= 0.
Integer power(long p, unsigned long e);

}  // namespace omv
