#include <doctest.h>

#include "omv/local_counts.hpp"
#include "support.hpp"

using namespace omv;
using omv::testing::uniform;

namespace {

const std::pair<long, int> kPrimePowers[] = {{2, 3}, {3, 1}, {5, 1}, {7, 1}};

// textbook oracle: evaluate v^T G v / 2 from scratch for every vector
ValueDistribution naive(const IntMatrix& g, long a) {
  const std::size_t n = g.rows();
  ValueDistribution d{a, std::vector<Integer>(static_cast<std::size_t>(a), Integer(0))};
  std::vector<long> v(n, 0);
  for (;;) {
    Integer s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += g(i, j) * v[i] * v[j];
    s /= 2;
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), s.get_mpz_t(), static_cast<unsigned long>(a));
    d.counts[r.get_ui()] += 1;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++v[i] < a) break;
      v[i] = 0;
    }
    if (i == n) break;
  }
  return d;
}

Rational frac(const Integer& a, const Integer& b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("brute distribution examples") {
  const auto d = brute_distribution(build("A1"), 8);
  CHECK(d.n10() == 4);
  CHECK(d.counts[1] == 4);
  CHECK(d.total() == 8);
  for (long p : {3, 5, 7}) CHECK(brute_distribution(build("U"), p).n10() == p - 1);
  CHECK(brute_distribution(build("U"), 8).n10() == 4);
  CHECK_THROWS_AS(brute_distribution(build("E8"), 16), Error);
}

TEST_CASE("brute distribution matches the naive oracle") {
  for (int t = 0; t < 40; ++t) {
    const auto lat = testing::random_even_lattice(static_cast<std::size_t>(uniform(1, 3)), 6);
    for (long a : {2L, 3L, 4L, 8L, 9L}) CHECK(brute_distribution(lat, a) == naive(lat.gram(), a));
  }
}

TEST_CASE("block diagonalization examples") {
  const EvenLattice diag(IntMatrix{{2, 0, 0}, {0, 6, 0}, {0, 0, -10}});
  auto blocks = block_diagonalize_mod(diag, 3, 1);
  REQUIRE(blocks.size() == 3);
  for (const auto& b : blocks) CHECK(b.rows() == 1);

  blocks = block_diagonalize_mod(build("U"), 2, 3);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0] == IntMatrix{{0, 1}, {1, 0}});

  blocks = block_diagonalize_mod(build("U"), 5, 1);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].rows() == 1);
  CHECK(blocks[1].rows() == 1);
  CHECK(fast_distribution(build("U"), 5, 1) == brute_distribution(build("U"), 5));

  for (long p : {3L, 5L, 7L})
    for (const auto& b : block_diagonalize_mod(build("U^2 + E8 + D4(-1) + A2(3)"), p, 1)) CHECK(b.rows() == 1);
}

TEST_CASE("fast distribution equals brute force on random lattices") {
  int mismatches = 0, runs = 0;
  for (int t = 0; t < 220; ++t) {
    const auto lat = testing::random_even_lattice(static_cast<std::size_t>(uniform(1, 4)), 6);
    for (auto [p, w] : kPrimePowers) {
      const long a = power(p, static_cast<unsigned long>(w)).get_si();
      if (fast_distribution(lat, p, w) != brute_distribution(lat, a)) ++mismatches;
      ++runs;
    }
  }
  CHECK(runs == 880);
  CHECK(mismatches == 0);
}

TEST_CASE("mass conservation and basis invariance") {
  CHECK(fast_distribution(build("E8"), 3, 1).total() == 6561);
  CHECK(fast_distribution(build("U^2 + E8^2 + A1"), 2, 3).total() == power(8, 21));
  for (int t = 0; t < 40; ++t) {
    const auto lat = testing::random_even_lattice(static_cast<std::size_t>(uniform(2, 4)), 6);
    const auto s = testing::random_unimodular(lat.rank());
    const EvenLattice other(s.transposed() * lat.gram() * s);
    for (auto [p, w] : kPrimePowers) CHECK(fast_distribution(lat, p, w) == fast_distribution(other, p, w));
  }
}

TEST_CASE("adding U convolves the distribution") {
  for (int t = 0; t < 30; ++t) {
    const auto m = testing::random_even_lattice(static_cast<std::size_t>(uniform(1, 3)), 6);
    const auto mu = direct_sum(m, build("U"));
    for (long p : {3L, 5L, 7L}) {
      const auto want = convolve(brute_distribution(m, p), brute_distribution(build("U"), p));
      CHECK(fast_distribution(mu, p, 1) == want);
      CHECK(brute_distribution(mu, p) == want);
    }
  }
}

TEST_CASE("large lattices against block-wise brute force") {
  // orthogonal summands can be enumerated separately and convolved
  const char* parts[] = {"U", "U", "E8(-1)", "A1(-13)"};
  for (auto [p, w] : {std::pair<long, int>{2, 3}, {13, 1}, {3, 1}}) {
    const long a = power(p, static_cast<unsigned long>(w)).get_si();
    ValueDistribution want{a, std::vector<Integer>(static_cast<std::size_t>(a), Integer(0))};
    want.counts[0] = 1;
    for (const char* e : parts) {
      const auto lat = build(e);
      // E8 at a = 8 is 8^8 vectors; split it via its own blocks
      want = convolve(want, lat.rank() <= 4 ? brute_distribution(lat, a) : fast_distribution(lat, p, w));
    }
    CHECK(fast_distribution(build("U^2 + E8(-1) + A1(-13)"), p, w) == want);
  }
  // E8 itself: 3^8 is feasible for the brute route
  CHECK(fast_distribution(build("E8"), 3, 1) == brute_distribution(build("E8"), 3));
}

TEST_CASE("local factors") {
  const auto l = normalize_b2(build("U^2 + A1(-13)"));
  const HalfInt k{5};
  const auto f2 = local_factor(l, 2, k);
  CHECK(f2.w == 3);
  CHECK(f2.n10 == 4224);
  CHECK(f2.normalized == Rational(11, 10));
  const auto f13 = local_factor(l, 13, k);
  CHECK(f13.w == 1);
  CHECK(f13.n10 == 28392);
  CHECK(f13.normalized == frac(28392, 28560));  // 13^4 - 1 = 28560

  const auto a2 = build("U^2 + A2");
  const auto f3 = local_factor(a2, 3, HalfInt{6});
  CHECK(f3.n10 == brute_distribution(a2, 3).n10());
  CHECK(f3.normalized == frac(brute_distribution(a2, 3).n10(), 243));
  CHECK(f3.normalized > 0);
}
