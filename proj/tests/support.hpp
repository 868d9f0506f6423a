#pragma once

#include <random>

#include "omv/lattice.hpp"

namespace omv::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

// symmetric even-diagonal matrix with entries in [-bound, bound]; retries until nondegenerate
inline EvenLattice random_even_lattice(std::size_t n, long bound) {
  for (;;) {
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      g(i, i) = 2 * uniform(-bound / 2, bound / 2);
      for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = uniform(-bound, bound);
    }
    if (bareiss_determinant(g) != 0) return EvenLattice(g);
  }
}

// random unimodular matrix as a product of elementary operations
inline IntMatrix random_unimodular(std::size_t n, int steps = 12) {
  IntMatrix s = IntMatrix::identity(n);
  if (n < 2) return s;
  for (int t = 0; t < steps; ++t) {
    const auto i = static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1));
    auto j = static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    s.add_row(i, j, Integer(uniform(-2, 2)));
  }
  return s;
}

}  // namespace omv::testing
