#include "omv/disc_form.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "omv/arith.hpp"

namespace omv {

Rational mod_rational(const Rational& x, long m) {
  Integer q;
  Integer num = x.get_num();
  Integer den = x.get_den() * m;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Rational r = x - Rational(q * m);
  r.canonicalize();
  return r;
}

namespace {

RatMatrix reduce_gram(RatMatrix g) {
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = mod_rational(g(i, j), i == j ? 2 : 1);
  return g;
}

std::int64_t to_i64(const Integer& v) {
  if (!v.fits_slong_p()) throw Error("value does not fit in 64 bits: " + v.get_str());
  return v.get_si();
}

}  // namespace

DiscriminantForm::DiscriminantForm(std::vector<Integer> invariant_factors, RatMatrix generator_gram,
                                   std::vector<std::vector<Rational>> generators)
    : factors_(std::move(invariant_factors)),
      gram_(reduce_gram(std::move(generator_gram))),
      generators_(std::move(generators)) {
  if (gram_.rows() != factors_.size() || !gram_.is_square())
    throw Error("generator Gram matrix does not match the invariant factors");
  if (!gram_.is_symmetric()) throw Error("generator Gram matrix is not symmetric");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] <= 1) throw Error("invariant factors must exceed 1");
    if (i > 0 && !mpz_divisible_p(factors_[i].get_mpz_t(), factors_[i - 1].get_mpz_t()))
      throw Error("invariant factors must form a divisor chain");
    // d_i g_i = 0 forces d_i b(g_i, .) = 0 and d_i qq(g_i) = 0 mod 2
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      const Rational v = gram_(i, j) * Rational(factors_[i]);
      const bool ok = (i == j) ? mod_rational(v, 1) == 0 && mod_rational(gram_(i, i) * Rational(factors_[i] * factors_[i]), 2) == 0
                               : mod_rational(v, 1) == 0;
      if (!ok) throw Error("generator Gram matrix is inconsistent with the invariant factors");
    }
  }
}

Integer DiscriminantForm::order() const {
  Integer n = 1;
  for (const auto& d : factors_) n *= d;
  return n;
}

std::uint64_t DiscriminantForm::enumerable_size(std::uint64_t limit) const {
  const Integer n = order();
  if (n > Integer(std::to_string(limit)))
    throw Error("discriminant group of order " + n.get_str() + " exceeds the limit " + std::to_string(limit));
  return static_cast<std::uint64_t>(n.get_ui());
}

DiscriminantForm::Element DiscriminantForm::element(std::uint64_t index) const {
  Element x(factors_.size());
  for (std::size_t i = factors_.size(); i-- > 0;) {
    const auto d = static_cast<std::uint64_t>(to_i64(factors_[i]));
    x[i] = static_cast<std::int64_t>(index % d);
    index /= d;
  }
  return x;
}

std::uint64_t DiscriminantForm::index_of(const Element& x) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto d = to_i64(factors_[i]);
    idx = idx * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(mod_floor(x[i], d));
  }
  return idx;
}

DiscriminantForm::Element DiscriminantForm::add(const Element& x, const Element& y) const {
  Element z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = mod_floor(x[i] + y[i], to_i64(factors_[i]));
  return z;
}

DiscriminantForm::Element DiscriminantForm::multiply(std::int64_t k, const Element& x) const {
  Element z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto d = to_i64(factors_[i]);
    z[i] = mod_floor(mod_floor(k, d) * x[i], d);
  }
  return z;
}

std::int64_t DiscriminantForm::element_order(const Element& x) const {
  std::int64_t o = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto d = to_i64(factors_[i]);
    o = std::lcm(o, d / std::gcd(mod_floor(x[i], d), d));
  }
  return o;
}

Rational DiscriminantForm::qq(const Element& x) const {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    s += Rational(x[i] * x[i]) * gram_(i, i);
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j] != 0) s += Rational(2 * x[i] * x[j]) * gram_(i, j);
  }
  return mod_rational(s, 2);
}

Rational DiscriminantForm::q(const Element& x) const { return mod_rational(qq(x) / 2, 1); }

Rational DiscriminantForm::b(const Element& x, const Element& y) const {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (x[i] != 0 && y[j] != 0) s += Rational(x[i] * y[j]) * gram_(i, j);
  return mod_rational(s, 1);
}

DiscriminantForm DiscriminantForm::flipped() const {
  RatMatrix g = gram_;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = -g(i, j);
  return DiscriminantForm(factors_, g, generators_);
}

Integer DiscriminantForm::level() const {
  Integer n = 1;
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    for (std::size_t j = i; j < gram_.cols(); ++j) {
      const Rational v = (i == j) ? Rational(gram_(i, i) / 2) : gram_(i, j);
      n = lcm(n, Rational(v).get_den());
    }
  return n;
}

std::vector<std::pair<long, DiscriminantForm>> DiscriminantForm::primary_parts() const {
  std::vector<std::pair<long, DiscriminantForm>> parts;
  if (is_trivial()) return parts;
  for (long p : prime_factors(order())) {
    std::vector<std::size_t> idx;
    std::vector<Integer> facs;
    std::vector<Integer> scale;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int v = valuation(factors_[i], p);
      if (v == 0) continue;
      Integer pv;
      mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v));
      idx.push_back(i);
      facs.push_back(pv);
      scale.push_back(factors_[i] / pv);
    }
    RatMatrix g(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t c = 0; c < idx.size(); ++c) g(a, c) = gram_(idx[a], idx[c]) * Rational(scale[a] * scale[c]);
    std::vector<std::vector<Rational>> gens;
    if (!generators_.empty())
      for (std::size_t a = 0; a < idx.size(); ++a) {
        auto v = generators_[idx[a]];
        for (auto& x : v) x *= Rational(scale[a]);
        gens.push_back(std::move(v));
      }
    parts.emplace_back(p, DiscriminantForm(facs, g, gens));
  }
  return parts;
}

long value_denominator(const DiscriminantForm& df) {
  Integer t = 1;
  const auto& g = df.generator_gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) t = lcm(t, Rational(g(i, j)).get_den());
  return to_i64(t);
}

ValueTable value_table(const DiscriminantForm& df, std::uint64_t limit, long denom) {
  ValueTable vt;
  vt.denom = denom > 0 ? denom : value_denominator(df);
  const std::uint64_t n = df.enumerable_size(limit);
  const std::size_t m = df.length();
  const auto& g = df.generator_gram();
  // integer Gram scaled by denom: diag mod 2*denom, off-diagonal doubled mod 2*denom
  std::vector<std::int64_t> gi(m * m);
  const std::int64_t two_t = 2 * vt.denom;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Rational v = g(i, j) * vt.denom;
      if (v.get_den() != 1) throw Error("value_table: denominator does not clear the form");
      gi[i * m + j] = mod_floor(to_i64(v.get_num()), two_t);
    }
  std::vector<std::int64_t> facs(m);
  for (std::size_t i = 0; i < m; ++i) facs[i] = to_i64(df.invariant_factors()[i]);

  vt.qq_num.resize(n);
  vt.orders.resize(n);
  DiscriminantForm::Element x(m, 0);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    __int128 s = 0;
    std::int64_t o = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (x[i] == 0) continue;
      s += static_cast<__int128>(x[i]) * x[i] % two_t * gi[i * m + i];
      for (std::size_t j = i + 1; j < m; ++j)
        if (x[j] != 0) s += static_cast<__int128>(2 * x[i] % two_t) * x[j] % two_t * gi[i * m + j];
      s %= two_t;
      o = std::lcm(o, facs[i] / std::gcd(x[i], facs[i]));
    }
    vt.qq_num[idx] = mod_floor(static_cast<std::int64_t>(s), two_t);
    vt.orders[idx] = o;
    // odometer, last coordinate fastest (matches DiscriminantForm::element)
    for (std::size_t i = m; i-- > 0;) {
      if (++x[i] < facs[i]) break;
      x[i] = 0;
    }
  }
  return vt;
}

DiscriminantForm discriminant_form(const EvenLattice& lat) {
  const IntMatrix& gram = lat.gram();
  const std::size_t n = gram.rows();
  const SmithForm snf = smith_normal_form(gram);
  const RatMatrix ginv = rational_inverse(gram);

  std::vector<Integer> factors;
  std::vector<std::vector<Rational>> ys;  // generators of Z^n / G Z^n
  for (std::size_t i = 0; i < snf.diagonal.size(); ++i) {
    if (snf.diagonal[i] == 1) continue;
    factors.push_back(snf.diagonal[i]);
    std::vector<Rational> y(n);
    for (std::size_t r = 0; r < n; ++r) y[r] = Rational(snf.left_inverse(r, i));
    ys.push_back(std::move(y));
  }
  const std::size_t m = factors.size();
  // dual vectors x_i = G^{-1} y_i, pairing <x_i, x_j> = y_i^T G^{-1} y_j
  std::vector<std::vector<Rational>> gens(m, std::vector<Rational>(n));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t r = 0; r < n; ++r) {
      Rational s = 0;
      for (std::size_t c = 0; c < n; ++c) s += ginv(r, c) * ys[k][c];
      gens[k][r] = s;
    }
  RatMatrix g(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = 0; c < m; ++c) {
      Rational s = 0;
      for (std::size_t r = 0; r < n; ++r) s += ys[a][r] * gens[c][r];
      g(a, c) = s;
    }
  return DiscriminantForm(std::move(factors), std::move(g), std::move(gens));
}

Integer level(const EvenLattice& lat) {
  // q(G^{-1} y) = sum_i (G^{-1})_ii y_i^2 / 2 + sum_{i<j} (G^{-1})_ij y_i y_j for y in Z^n,
  // so N q is integral on the dual exactly when N clears (G^{-1})_ii / 2 and (G^{-1})_ij.
  const RatMatrix ginv = rational_inverse(lat.gram());
  Integer n = 1;
  for (std::size_t i = 0; i < ginv.rows(); ++i)
    for (std::size_t j = i; j < ginv.cols(); ++j) {
      const Rational v = (i == j) ? Rational(ginv(i, i) / 2) : ginv(i, j);
      n = lcm(n, Rational(v).get_den());
    }
  return n;
}

DiscriminantForm flip(const DiscriminantForm& df) { return df.flipped(); }

// ---------------------------------------------------------------------------
// Isometry search

namespace {

constexpr std::uint64_t kIsoLimit = 10000;

class IsoSearch {
 public:
  IsoSearch(const DiscriminantForm& src, const DiscriminantForm& dst) : src_(src), dst_(dst) {
    denom_ = std::lcm(value_denominator(src), value_denominator(dst));
    table_ = value_table(dst, kIsoLimit, denom_);
    size_ = table_.qq_num.size();
    m_ = src.length();
    for (std::size_t i = 0; i < m_; ++i) facs_.push_back(to_i64(src.invariant_factors()[i]));

    const ValueTable st = value_table(src, kIsoLimit, denom_);
    target_qq_.resize(m_);
    target_b_.assign(m_ * m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      DiscriminantForm::Element e(m_, 0);
      e[i] = 1;
      target_qq_[i] = st.qq_num[src.index_of(e)];
      for (std::size_t j = 0; j < m_; ++j) target_b_[i * m_ + j] = scaled_b(src, i, j);
    }
    dst_b_.assign(m_ * m_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) dst_b_[i * m_ + j] = scaled_b(dst, i, j);

    candidates_.resize(m_);
    for (std::uint64_t x = 0; x < size_; ++x)
      for (std::size_t i = 0; i < m_; ++i)
        if (table_.orders[x] == facs_[i] && table_.qq_num[x] == target_qq_[i]) candidates_[i].push_back(x);
  }

  bool run() {
    images_.clear();
    std::vector<char> subgroup(size_, 0);
    subgroup[0] = 1;
    return extend(0, subgroup, 1);
  }

 private:
  const DiscriminantForm& src_;
  const DiscriminantForm& dst_;
  long denom_ = 1;
  ValueTable table_;
  std::uint64_t size_ = 0;
  std::size_t m_ = 0;
  std::vector<std::int64_t> facs_;
  std::vector<std::int64_t> target_qq_;
  std::vector<std::int64_t> target_b_;  // b(g_i,g_j) * denom mod denom
  std::vector<std::int64_t> dst_b_;
  std::vector<std::vector<std::uint64_t>> candidates_;
  std::vector<DiscriminantForm::Element> images_;

  std::int64_t scaled_b(const DiscriminantForm& df, std::size_t i, std::size_t j) const {
    const Rational v = mod_rational(df.generator_gram()(i, j), 1) * denom_;
    return mod_floor(to_i64(v.get_num()), denom_);
  }

  std::int64_t pair(const DiscriminantForm::Element& x, const DiscriminantForm::Element& y) const {
    __int128 s = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < m_; ++j)
        if (y[j] != 0) s = (s + static_cast<__int128>(x[i]) * y[j] % denom_ * dst_b_[i * m_ + j]) % denom_;
    }
    return static_cast<std::int64_t>(s);
  }

  bool extend(std::size_t i, const std::vector<char>& subgroup, std::uint64_t sub_size) {
    if (i == m_) return sub_size == size_;
    for (std::uint64_t cand : candidates_[i]) {
      const DiscriminantForm::Element h = dst_.element(cand);
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = pair(h, images_[j]) == target_b_[j * m_ + i];
      if (!ok) continue;
      // <images, h> must be a direct sum of order sub_size * d_i
      DiscriminantForm::Element multiple = h;
      for (std::int64_t c = 1; c < facs_[i] && ok; ++c) {
        if (subgroup[dst_.index_of(multiple)]) ok = false;
        multiple = dst_.add(multiple, h);
      }
      if (!ok) continue;
      std::vector<char> next(size_, 0);
      for (std::uint64_t s = 0; s < size_; ++s) {
        if (!subgroup[s]) continue;
        DiscriminantForm::Element e = dst_.element(s);
        for (std::int64_t c = 0; c < facs_[i]; ++c) {
          next[dst_.index_of(e)] = 1;
          e = dst_.add(e, h);
        }
      }
      images_.push_back(h);
      if (extend(i + 1, next, sub_size * static_cast<std::uint64_t>(facs_[i]))) return true;
      images_.pop_back();
    }
    return false;
  }
};

}  // namespace

bool iso_check(const DiscriminantForm& a, const DiscriminantForm& b) {
  if (a.invariant_factors() != b.invariant_factors()) return false;
  if (a.order() > kIsoLimit || b.order() > kIsoLimit)
    throw Error("iso_check: group order exceeds " + std::to_string(kIsoLimit));
  if (a.is_trivial()) return true;
  return IsoSearch(a, b).run();
}

// ---------------------------------------------------------------------------
// Milgram signature

namespace {

using Poly = std::vector<Integer>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// exact division by a monic divisor
Poly poly_div_exact(Poly a, const Poly& b) {
  const std::size_t db = b.size() - 1;
  Poly q(a.size() - db, Integer(0));
  for (std::size_t k = a.size(); k-- > db;) {
    const Integer c = a[k];
    q[k - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
  }
  return q;
}

// x^d - 1
Poly xd_minus_one(long d) {
  Poly p(static_cast<std::size_t>(d) + 1, Integer(0));
  p[0] = -1;
  p[static_cast<std::size_t>(d)] = 1;
  return p;
}

int mobius(long n) {
  int r = 1;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

Poly cyclotomic(long k) {
  Poly num{Integer(1)};
  std::vector<long> dens;
  for (long d = 1; d <= k; ++d) {
    if (k % d) continue;
    const int mu = mobius(k / d);
    if (mu == 1) num = poly_mul(num, xd_minus_one(d));
    if (mu == -1) dens.push_back(d);
  }
  for (long d : dens) num = poly_div_exact(num, xd_minus_one(d));
  return num;
}

// remainder modulo a monic polynomial
Poly poly_mod(Poly a, const Poly& m) {
  const std::size_t dm = m.size() - 1;
  for (std::size_t k = a.size(); k-- > dm;) {
    const Integer c = a[k];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dm; ++j) a[k - dm + j] -= c * m[j];
  }
  a.resize(dm);
  return a;
}

constexpr std::uint64_t kMilgramLimit = 1000000;
constexpr long kMaxCyclotomicOrder = 8192;

int milgram_primary(const DiscriminantForm& df) {
  const ValueTable vt = value_table(df, kMilgramLimit);
  const long two_t = 2 * vt.denom;
  const long k = std::lcm(two_t, 8L);
  if (k > kMaxCyclotomicOrder)
    throw Error("milgram_signature: cyclotomic order " + std::to_string(k) + " too large for exact evaluation");
  const long stride = k / two_t;

  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (auto v : vt.qq_num) counts[static_cast<std::size_t>(v * stride)] += 1;

  // square of the Gauss sum in Z[x]/(x^k - 1), then reduce mod Phi_k
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i]) support.push_back(i);
  Poly sq(static_cast<std::size_t>(k), Integer(0));
  for (std::size_t a : support)
    for (std::size_t c : support) sq[(a + c) % static_cast<std::size_t>(k)] += Integer(counts[a]) * Integer(counts[c]);
  const Poly phi = cyclotomic(k);
  const Poly sq_red = poly_mod(sq, phi);

  const Integer order = df.order();
  int s4 = -1;
  for (int s = 0; s < 4 && s4 < 0; ++s) {
    Poly target(static_cast<std::size_t>(k), Integer(0));
    target[static_cast<std::size_t>(s * k / 4)] = order;
    if (poly_mod(target, phi) == sq_red) s4 = s;
  }
  if (s4 < 0) throw Error("milgram_signature: Gauss sum has the wrong modulus (invalid quadratic form)");

  // G = +-sqrt(|A|) exp(pi i s4/4); the sign is separated by a gap of 2 sqrt(|A|)
  std::complex<double> g = 0;
  for (std::size_t a : support)
    g += static_cast<double>(counts[a]) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(k));
  const double root = std::sqrt(order.get_d());
  const std::complex<double> ref = std::polar(root, std::numbers::pi * s4 / 4.0);
  return std::abs(g - ref) < std::abs(g + ref) ? s4 : s4 + 4;
}

}  // namespace

int milgram_signature(const DiscriminantForm& df) {
  int s = 0;
  for (const auto& [p, part] : df.primary_parts()) s += milgram_primary(part);
  return s % 8;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const DiscriminantForm& df) {
  j = nlohmann::json::object();
  auto facs = nlohmann::json::array();
  for (const auto& d : df.invariant_factors()) facs.push_back(to_i64(d));
  j["invariant_factors"] = facs;
  auto qq = nlohmann::json::array();
  auto gram = nlohmann::json::array();
  for (std::size_t i = 0; i < df.length(); ++i) {
    qq.push_back(df.generator_gram()(i, i).get_str());
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < df.length(); ++c) row.push_back(df.generator_gram()(i, c).get_str());
    gram.push_back(row);
  }
  j["generator_qq"] = qq;
  j["generator_gram"] = gram;
}

void from_json(const nlohmann::json& j, DiscriminantForm& df) {
  std::vector<Integer> facs;
  for (const auto& d : j.at("invariant_factors")) facs.emplace_back(d.get<long>());
  const std::size_t m = facs.size();
  RatMatrix g(m, m);
  if (j.contains("generator_gram")) {
    const auto& rows = j.at("generator_gram");
    if (rows.size() != m) throw Error("generator_gram has the wrong size");
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != m) throw Error("generator_gram has the wrong size");
      for (std::size_t c = 0; c < m; ++c) g(i, c) = Rational(rows[i][c].get<std::string>());
    }
  } else {
    // cyclic forms are determined by their generator value alone
    const auto& qq = j.at("generator_qq");
    if (m > 1) throw Error("generator_gram is required for non-cyclic forms");
    for (std::size_t i = 0; i < m; ++i) g(i, i) = Rational(qq[i].get<std::string>());
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < m; ++c) g(i, c).canonicalize();
  df = DiscriminantForm(std::move(facs), std::move(g));
}

}  // namespace omv
