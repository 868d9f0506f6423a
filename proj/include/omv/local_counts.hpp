#pragma once

#include <vector>

#include "omv/arith.hpp"
#include "omv/lattice.hpp"

namespace omv {

/// counts[c] = #{v in (Z/a)^n : q(v) = c mod a}, q(v) = v^T G v / 2.
struct ValueDistribution {
  long modulus = 1;
  std::vector<Integer> counts;

  Integer total() const;
  /// N_{1,0}(a)
  const Integer& n10() const { return counts[modulus == 1 ? 0 : 1]; }
  bool operator==(const ValueDistribution&) const = default;
};

/// Exhaustive enumeration; requires a^n <= 10^8.
ValueDistribution brute_distribution(const EvenLattice& lat, long a);

/// 1x1 and 2x2 integer blocks whose orthogonal sum has the same value distribution mod p^w as lat.
/// Entries are reduced mod p^(w+3). 2x2 blocks only occur for p = 2.
std::vector<IntMatrix> block_diagonalize_mod(const EvenLattice& lat, long p, int w);

/// Distribution mod p^w via block_diagonalize_mod and cyclic convolution. Requires p^w <= 4096.
ValueDistribution fast_distribution(const EvenLattice& lat, long p, int w);

/// Distribution of a single block (or any small even Gram matrix) mod a, by enumeration.
ValueDistribution block_distribution(const IntMatrix& gram, long a);

ValueDistribution convolve(const ValueDistribution& x, const ValueDistribution& y);

struct LocalFactor {
  long p = 2;
  int w = 3;
  Integer n10;
  Rational normalized;
};

inline int local_exponent(long p) { return p == 2 ? 3 : 1; }

/// N_{1,0}(p^w) / p^((2k-1)w), further divided by (1 - p^(1-2k)) when k is not integral.
LocalFactor local_factor(const EvenLattice& lat, long p, HalfInt k);

}  // namespace omv
