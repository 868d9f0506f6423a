#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omv/lattice.hpp"
#include "omv/lfunctions.hpp"
#include "omv/local_counts.hpp"

namespace omv {

/*
 * Sign conventions for the quadratic characters in the (1,0)-coefficient formula.
 *
 *   even rank:  chi_{4D},  D  = (-1)^k det L
 *   odd rank:   chi_{D'},  D' = 2 (-1)^(k+1/2) det L
 *
 * AsPrinted uses both literally; FlipOddDisc negates D' (this is what reproduces the
 * published rational values); FlipEvenDisc negates 4D and keeps D' as printed.
 */
enum class CharacterConvention { AsPrinted, FlipOddDisc, FlipEvenDisc };

constexpr CharacterConvention kDefaultConvention = CharacterConvention::FlipOddDisc;

std::string to_string(CharacterConvention c);

/// Three-valued outcome of a strict numeric inequality, plus "hypothesis not met".
enum class Truth { Holds, Fails, Inconclusive, NotApplicable };

std::string to_string(Truth t);

/// k = b/2 + 1 for signature (b,2), i.e. rank/2.
inline HalfInt weight_for_b(long b) { return HalfInt{b + 2}; }

/// (2 pi)^k / (Gamma(k) zeta(floor k)) with k = b/2 + 1.
PrecReal r_of_k(long b, int digits = kDefaultDigits);

/// Truncation (not rounding) to 3 decimals, as the printed table of r(k) does.
std::string truncate3(const PrecReal& x);

/// Product over p | 2N; the variant is selected by the parity of b (read from k) and u_count >= 2.
Rational c_of_nk(const Integer& n, HalfInt k, std::size_t u_count);

struct CoefficientResult {
  HalfInt k;
  bool odd_rank = false;
  Integer char_disc;                // 4D or D' after the convention is applied
  PrecReal archimedean_part;        // (2 pi)^k / (sqrt|A| Gamma(k))
  PrecReal l_ratio;                 // 1/L(k, chi_4D)  or  L(k-1/2, chi_D') / zeta(2k-1)
  std::vector<LocalFactor> local_factors;
  Rational local_product;
  PrecReal value;                   // negative
};

/// c_{1,0}(E_{k,L}) for a lattice of signature (b,2), b > 2.
CoefficientResult c10_coefficient(const EvenLattice& lat, int digits = kDefaultDigits,
                                  CharacterConvention conv = kDefaultConvention);

/// Same formula with k = rank/2 and no signature check. Its inputs (rank, signed det,
/// discriminant form, local counts) are genus data, so this evaluates the coefficient of
/// any lattice in the genus of `lat` with signature (rank-2, 2).
CoefficientResult c10_from_genus(const EvenLattice& lat, int digits = kDefaultDigits,
                                 CharacterConvention conv = kDefaultConvention);

struct Thm11Result {
  PrecReal rhs;
  PrecReal margin;  // rhs - 4b
  Truth holds = Truth::NotApplicable;
  Rational c_nk;
  PrecReal r_k;
};

/// 4b < r(k) / sqrt(D) * C(N,k). u_count = 0 gives NotApplicable with the numbers still filled in.
Thm11Result thm11_verdict(const Integer& d, const Integer& n, long b, std::size_t u_count,
                          int digits = kDefaultDigits);

enum class Verdict { UniruledThm11, UniruledProp32, Inconclusive };

std::string to_string(Verdict v);

struct CriterionReport {
  long b = 0;
  std::size_t rank = 0;
  Integer det;
  Integer d;  // |A_L|
  Integer n;  // level
  HalfInt k;
  std::size_t u_count = 0;
  long four_b = 0;
  Thm11Result thm11;
  std::optional<CoefficientResult> c10;
  PrecReal prop32_margin;  // |c10| - 4b
  Truth prop32 = Truth::NotApplicable;
  Verdict verdict = Verdict::Inconclusive;
  int digits = kDefaultDigits;
};

/// Both criteria for a (b,2) lattice. Undecided comparisons are retried at higher precision;
/// PrecisionError if still undecided at kMaxDigits.
CriterionReport prop32_verdict(const EvenLattice& lat, int digits = kDefaultDigits,
                               CharacterConvention conv = kDefaultConvention);

/// Both criteria for a genus representative: b is taken as rank - 2.
CriterionReport genus_verdict(const EvenLattice& lat, int digits = kDefaultDigits,
                              CharacterConvention conv = kDefaultConvention);

}  // namespace omv
