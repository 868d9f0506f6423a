#include "omv/arith.hpp"

namespace omv {

std::vector<long> prime_factors(const Integer& n) {
  std::vector<long> out;
  Integer m = abs(n);
  if (m == 0) throw Error("prime_factors(0)");
  for (long p = 2; Integer(p) * p <= m; ++p) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
      out.push_back(p);
      while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) m /= p;
    }
  }
  if (m > 1) {
    if (!m.fits_slong_p()) throw Error("prime factor too large: " + m.get_str());
    out.push_back(m.get_si());
  }
  return out;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

int valuation(const Integer& n, long p) {
  if (n == 0) throw Error("valuation of 0");
  Integer m = abs(n);
  int e = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    m /= p;
    ++e;
  }
  return e;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::string to_string(HalfInt k) {
  if (k.is_integral()) return std::to_string(k.twice / 2);
  return std::to_string(k.twice) + "/2";
}

Integer power(long p, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
  return r;
}

}  // namespace omv
