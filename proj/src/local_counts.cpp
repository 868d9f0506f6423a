#include "omv/local_counts.hpp"

#include <algorithm>
#include <cmath>

namespace omv {

Integer ValueDistribution::total() const {
  Integer s = 0;
  for (const auto& c : counts) s += c;
  return s;
}

namespace {

ValueDistribution enumerate(const IntMatrix& gram, long a) {
  const std::size_t n = gram.rows();

  using I = __int128;
  std::vector<I> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i * n + j] = mod_floor(Integer(gram(i, j) % a).get_si(), a);
  std::vector<I> half(n);
  for (std::size_t i = 0; i < n; ++i) {
    // G_ii / 2 mod a, from the exact even entry
    const Integer h = gram(i, i) / 2;
    half[i] = mod_floor(Integer(h % a).get_si(), a);
  }

  std::vector<std::int64_t> counts(static_cast<std::size_t>(a), 0);
  std::vector<long> v(n, 0);
  std::vector<I> gv(n, 0);  // G v mod a
  I q = 0;
  auto mod = [a](I x) { x %= a; return x < 0 ? x + a : x; };
  for (;;) {
    ++counts[static_cast<std::size_t>(q)];
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (v[i] + 1 < a) {
        // q(v + e_i) = q(v) + (Gv)_i + G_ii/2
        q = mod(q + gv[i] + half[i]);
        for (std::size_t r = 0; r < n; ++r) gv[r] = mod(gv[r] + g[r * n + i]);
        ++v[i];
        break;
      }
      // v_i wraps from a-1 to 0: subtract t e_i with t = a-1
      const I t = a - 1;
      q = mod(q - t * gv[i] + mod(t * t) * half[i]);
      for (std::size_t r = 0; r < n; ++r) gv[r] = mod(gv[r] - t * g[r * n + i]);
      v[i] = 0;
    }
    if (i == n) break;
  }
  ValueDistribution d{a, {}};
  for (auto c : counts) d.counts.emplace_back(c);
  return d;
}

}  // namespace

ValueDistribution brute_distribution(const EvenLattice& lat, long a) {
  if (a < 1) throw Error("brute_distribution: modulus must be positive");
  const std::size_t n = lat.rank();
  if (std::pow(static_cast<double>(a), static_cast<double>(n)) > 1e8)
    throw Error("brute_distribution: " + std::to_string(a) + "^" + std::to_string(n) + " exceeds 10^8 vectors");
  return enumerate(lat.gram(), a);
}

namespace {

Integer reduce(const Integer& x, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

// valuation with v(0) = cap
int val(const Integer& x, long p, int cap) {
  if (x == 0) return cap;
  return std::min(valuation(x, p), cap);
}

Integer inverse_mod(const Integer& u, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0) throw Error("block reduction: pivot is not a unit");
  return r;
}

}  // namespace

std::vector<IntMatrix> block_diagonalize_mod(const EvenLattice& lat, long p, int w) {
  if (!is_prime(p) || w < 1) throw Error("block_diagonalize_mod: need a prime p and w >= 1");
  const int k = w + 3;
  const Integer m = power(p, static_cast<unsigned long>(k));
  std::size_t n = lat.rank();
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = reduce(lat.gram()(i, j), m);

  std::vector<IntMatrix> blocks;
  while (n > 0) {
    int best = k + 1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const int v = val(g(i, j), p, k);
        // ties prefer a diagonal pivot
        if (v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best >= k) {
      // remaining form vanishes mod p^k
      for (std::size_t i = 0; i < n; ++i) blocks.push_back(IntMatrix(1, 1));
      break;
    }
    if (bi != bj && p != 2) {
      // e_i += e_j makes the diagonal entry reach the minimal valuation
      g.add_row(bi, bj, Integer(1));
      g.add_col(bi, bj, Integer(1));
      for (std::size_t r = 0; r < n; ++r) {
        g(bi, r) = reduce(g(bi, r), m);
        g(r, bi) = reduce(g(r, bi), m);
      }
      bj = bi;
    }

    // move the pivot rows to the front
    std::vector<std::size_t> piv = (bi == bj) ? std::vector<std::size_t>{bi} : std::vector<std::size_t>{bi, bj};
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (std::find(piv.begin(), piv.end(), i) == piv.end()) rest.push_back(i);
    const std::size_t s = piv.size();

    IntMatrix block(s, s);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t c = 0; c < s; ++c) block(a, c) = g(piv[a], piv[c]);
    blocks.push_back(block);

    // Schur complement: rest - X P^{-1} X^T, computed as X adj(P) X^T / det(P)
    IntMatrix adj(s, s);
    Integer det;
    if (s == 1) {
      adj(0, 0) = 1;
      det = block(0, 0);
    } else {
      adj(0, 0) = block(1, 1);
      adj(1, 1) = block(0, 0);
      adj(0, 1) = -block(0, 1);
      adj(1, 0) = -block(1, 0);
      det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
    }
    const int dv = valuation(det, p);
    const Integer pdv = power(p, static_cast<unsigned long>(dv));
    const Integer unit_inv = inverse_mod(Integer(det / pdv), m);

    IntMatrix next(rest.size(), rest.size());
    for (std::size_t a = 0; a < rest.size(); ++a)
      for (std::size_t c = a; c < rest.size(); ++c) {
        Integer num = 0;
        for (std::size_t x = 0; x < s; ++x)
          for (std::size_t y = 0; y < s; ++y) num += g(rest[a], piv[x]) * adj(x, y) * g(piv[y], rest[c]);
        if (!mpz_divisible_p(num.get_mpz_t(), pdv.get_mpz_t()))
          throw Error("block reduction: internal valuation check failed");
        num /= pdv;
        next(a, c) = next(c, a) = reduce(g(rest[a], rest[c]) - num * unit_inv, m);
      }
    g = std::move(next);
    n = rest.size();
  }
  return blocks;
}

ValueDistribution block_distribution(const IntMatrix& gram, long a) {
  if (!gram.is_symmetric()) throw Error("block_distribution: matrix is not symmetric");
  for (std::size_t i = 0; i < gram.rows(); ++i)
    if (!mpz_even_p(gram(i, i).get_mpz_t())) throw Error("block_distribution: odd diagonal entry");
  return enumerate(gram, a);
}

ValueDistribution convolve(const ValueDistribution& x, const ValueDistribution& y) {
  if (x.modulus != y.modulus) throw Error("convolve: moduli differ");
  const long a = x.modulus;
  ValueDistribution z{a, std::vector<Integer>(static_cast<std::size_t>(a), Integer(0))};
  for (long i = 0; i < a; ++i) {
    if (x.counts[static_cast<std::size_t>(i)] == 0) continue;
    for (long j = 0; j < a; ++j) {
      if (y.counts[static_cast<std::size_t>(j)] == 0) continue;
      z.counts[static_cast<std::size_t>((i + j) % a)] += x.counts[static_cast<std::size_t>(i)] * y.counts[static_cast<std::size_t>(j)];
    }
  }
  return z;
}

namespace {

// q(x) = d x^2 / 2 mod a; for odd p the entry d need not be even
ValueDistribution diagonal_distribution(const Integer& d, long p, long a) {
  ValueDistribution out{a, std::vector<Integer>(static_cast<std::size_t>(a), Integer(0))};
  const Integer two_a = 2 * Integer(a);
  const long dd = reduce(d, two_a).get_si();
  const long inv2 = (p == 2) ? 0 : (a + 1) / 2;
  for (long x = 0; x < a; ++x) {
    const __int128 sq = static_cast<__int128>(x) * x;
    long c;
    if (p == 2) {
      c = static_cast<long>((sq * dd / 2) % a);  // dd even
    } else {
      c = static_cast<long>((sq % a) * (dd % a) % a * inv2 % a);
    }
    out.counts[static_cast<std::size_t>(c)] += 1;
  }
  return out;
}

}  // namespace

ValueDistribution fast_distribution(const EvenLattice& lat, long p, int w) {
  const Integer a_big = power(p, static_cast<unsigned long>(w));
  if (a_big > 4096) throw Error("fast_distribution: p^w exceeds 4096");
  const long a = a_big.get_si();
  ValueDistribution total{a, std::vector<Integer>(static_cast<std::size_t>(a), Integer(0))};
  total.counts[0] = 1;
  for (const auto& b : block_diagonalize_mod(lat, p, w)) {
    ValueDistribution d;
    if (b.rows() == 1) {
      d = diagonal_distribution(b(0, 0), p, a);
    } else {
      // 2x2 blocks are even (p = 2), so the exact enumeration applies
      IntMatrix g(2, 2);
      const Integer m = 2 * Integer(a);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = reduce(b(i, j), m);
      d = ValueDistribution{a, std::vector<Integer>(static_cast<std::size_t>(a), Integer(0))};
      const long g00 = g(0, 0).get_si(), g01 = g(0, 1).get_si(), g11 = g(1, 1).get_si();
      for (long x = 0; x < a; ++x)
        for (long y = 0; y < a; ++y) {
          const long q = (g00 / 2 * x * x + g01 * x * y + g11 / 2 * y * y) % a;
          d.counts[static_cast<std::size_t>(q)] += 1;
        }
    }
    total = convolve(total, d);
  }
  return total;
}

LocalFactor local_factor(const EvenLattice& lat, long p, HalfInt k) {
  LocalFactor f;
  f.p = p;
  f.w = local_exponent(p);
  f.n10 = fast_distribution(lat, p, f.w).n10();
  const auto e = static_cast<unsigned long>((k.twice - 1) * f.w);
  f.normalized = Rational(f.n10, power(p, e));
  f.normalized.canonicalize();
  if (!k.is_integral()) {
    // 1 - p^(1-2k) with 1-2k = -(twice-1)
    const Integer pe = power(p, static_cast<unsigned long>(k.twice - 1));
    Rational c(pe - 1, pe);
    c.canonicalize();
    f.normalized /= c;
  }
  return f;
}

}  // namespace omv
