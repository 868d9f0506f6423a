#include "omv/eisenstein.hpp"

#include <algorithm>

#include "omv/disc_form.hpp"

namespace omv {

std::string to_string(CharacterConvention c) {
  switch (c) {
    case CharacterConvention::AsPrinted: return "as-printed";
    case CharacterConvention::FlipOddDisc: return "flip-odd-disc";
    case CharacterConvention::FlipEvenDisc: return "flip-even-disc";
  }
  return "?";
}

std::string to_string(Truth t) {
  switch (t) {
    case Truth::Holds: return "holds";
    case Truth::Fails: return "fails";
    case Truth::Inconclusive: return "inconclusive";
    case Truth::NotApplicable: return "not-applicable";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::UniruledThm11: return "UNIRULED_THM11";
    case Verdict::UniruledProp32: return "UNIRULED_PROP32";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

PrecReal two_pi_pow(HalfInt k) {
  // (2 pi)^k = (2 pi)^floor(k) * sqrt(2 pi) for half-integral k
  const PrecReal two_pi = PrecReal::exact(Rational(2)) * pi_value();
  PrecReal v = pow(two_pi, k.twice / 2);
  if (!k.is_integral()) v = v * sqrt(two_pi);
  return v;
}

Rational frac(const Integer& a, const Integer& b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

Truth compare_less(const Real& x, const PrecReal& y) {
  // x < y ?
  if (y.above(x)) return Truth::Holds;
  if (y.below(x) || y.upper() == x) return Truth::Fails;
  return Truth::Inconclusive;
}

}  // namespace

PrecReal r_of_k(long b, int digits) {
  check_digits(digits);
  if (b < 2) throw Error("r(k) needs b >= 2");
  const HalfInt k = weight_for_b(b);
  return two_pi_pow(k) / (gamma_half(k, digits) * zeta(k.floor(), digits));
}

std::string truncate3(const PrecReal& x) {
  // a value within its error bound of a grid point is read as that grid point
  const Real scaled = x.upper() * 1000;
  Integer t;
  mpfr_get_z(t.get_mpz_t(), scaled.backend().data(), MPFR_RNDD);
  const Integer whole = t / 1000;
  Integer frac = t % 1000;
  if (frac < 0) frac = -frac;
  std::string f = frac.get_str();
  while (f.size() < 3) f = "0" + f;
  return whole.get_str() + "." + f;
}

Rational c_of_nk(const Integer& n, HalfInt k, std::size_t u_count) {
  if (n < 1) throw Error("C(N,k): N must be positive");
  const bool two_u = u_count >= 2;
  Rational c = 1;
  for (long p : prime_factors(2 * n)) {
    const Integer pp = p;
    const Integer p2 = pp * pp;
    if (k.is_integral()) {
      c *= two_u ? frac(p2 - 1, p2) : frac(pp - 1, pp);
    } else {
      // 1 - p^(1-2k) = (p^e - 1) / p^e with e = 2k - 1
      const Integer pe = power(p, static_cast<unsigned long>(k.twice - 1));
      const Rational corr = frac(pe - 1, pe);
      c *= (two_u ? frac(p2 - 1, p2) : frac(pp - 1, pp)) / corr;
    }
  }
  c.canonicalize();
  return c;
}

CoefficientResult c10_from_genus(const EvenLattice& lat, int digits, CharacterConvention conv) {
  check_digits(digits);
  CoefficientResult r;
  r.k = HalfInt{static_cast<long>(lat.rank())};
  if (r.k.twice <= 4) throw LatticeError("the (1,0)-coefficient formula needs k > 2 (rank > 4)");
  r.odd_rank = !r.k.is_integral();
  const Integer det = lat.det();
  const Integer order = abs(det);
  const Integer n = level(lat);

  r.archimedean_part = two_pi_pow(r.k) / (sqrt(PrecReal::exact(Rational(order))) * gamma_half(r.k, digits));

  if (!r.odd_rank) {
    const long kk = r.k.twice / 2;
    const Integer d = (kk % 2 == 0) ? det : Integer(-det);
    r.char_disc = 4 * d;
    if (conv == CharacterConvention::FlipEvenDisc) r.char_disc = -r.char_disc;
    r.l_ratio = PrecReal(Real(1)) / dirichlet_l(kk, RealChar(r.char_disc), digits);
  } else {
    // (-1)^(k + 1/2) with k + 1/2 = (twice + 1) / 2
    const long e = (r.k.twice + 1) / 2;
    r.char_disc = 2 * ((e % 2 == 0) ? det : Integer(-det));
    if (conv == CharacterConvention::FlipOddDisc) r.char_disc = -r.char_disc;
    r.l_ratio = dirichlet_l(r.k.floor(), RealChar(r.char_disc), digits) / zeta(r.k.twice - 1, digits);
  }

  r.local_product = 1;
  for (long p : prime_factors(2 * n)) {
    LocalFactor f = local_factor(lat, p, r.k);
    r.local_product *= f.normalized;
    r.local_factors.push_back(std::move(f));
  }
  r.value = -(r.archimedean_part * r.l_ratio * PrecReal::exact(r.local_product));
  return r;
}

CoefficientResult c10_coefficient(const EvenLattice& lat, int digits, CharacterConvention conv) {
  const auto sig = signature(lat);
  if (sig.n_minus != 2) throw LatticeError("c10_coefficient needs signature (b,2); normalize first");
  if (sig.n_plus <= 2) throw LatticeError("c10_coefficient needs b > 2");
  return c10_from_genus(lat, digits, conv);
}

Thm11Result thm11_verdict(const Integer& d, const Integer& n, long b, std::size_t u_count, int digits) {
  if (d < 1 || n < 1) throw Error("thm11_verdict: D and N must be positive");
  Thm11Result t;
  const HalfInt k = weight_for_b(b);
  t.r_k = r_of_k(b, digits);
  t.c_nk = c_of_nk(n, k, u_count);
  t.rhs = t.r_k / sqrt(PrecReal::exact(Rational(d))) * PrecReal::exact(t.c_nk);
  t.margin = t.rhs - PrecReal(Real(4 * b));
  t.holds = u_count == 0 ? Truth::NotApplicable : compare_less(Real(4 * b), t.rhs);
  return t;
}

namespace {

CriterionReport evaluate(const EvenLattice& lat, long b, int digits, CharacterConvention conv) {
  CriterionReport rep;
  rep.b = b;
  rep.rank = lat.rank();
  rep.det = lat.det();
  rep.d = abs(rep.det);
  rep.n = level(lat);
  rep.k = weight_for_b(b);
  rep.u_count = lat.u_count();
  rep.four_b = 4 * b;
  rep.digits = digits;
  rep.thm11 = thm11_verdict(rep.d, rep.n, b, rep.u_count, digits);
  rep.c10 = c10_from_genus(lat, digits, conv);
  rep.prop32_margin = abs(rep.c10->value) - PrecReal(Real(rep.four_b));
  rep.prop32 = compare_less(Real(rep.four_b), abs(rep.c10->value));
  if (rep.thm11.holds == Truth::Holds)
    rep.verdict = Verdict::UniruledThm11;
  else if (rep.prop32 == Truth::Holds)
    rep.verdict = Verdict::UniruledProp32;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

CriterionReport escalate(const EvenLattice& lat, long b, int digits, CharacterConvention conv) {
  check_digits(digits);
  for (;;) {
    CriterionReport rep = evaluate(lat, b, digits, conv);
    const bool undecided = rep.thm11.holds == Truth::Inconclusive || rep.prop32 == Truth::Inconclusive;
    if (!undecided || rep.verdict != Verdict::Inconclusive) return rep;
    if (digits >= kMaxDigits)
      throw PrecisionError("criterion undecided at " + std::to_string(kMaxDigits) + " digits");
    digits = std::min(kMaxDigits, 2 * digits);
  }
}

}  // namespace

CriterionReport prop32_verdict(const EvenLattice& lat, int digits, CharacterConvention conv) {
  const auto sig = signature(lat);
  if (sig.n_minus != 2 || sig.n_plus <= 2) throw LatticeError("prop32_verdict needs signature (b,2) with b > 2");
  return escalate(lat, static_cast<long>(sig.n_plus), digits, conv);
}

CriterionReport genus_verdict(const EvenLattice& lat, int digits, CharacterConvention conv) {
  if (lat.rank() <= 4) throw LatticeError("genus_verdict needs rank > 4");
  return escalate(lat, static_cast<long>(lat.rank()) - 2, digits, conv);
}

}  // namespace omv
