#include "omv/lattice.hpp"

#include <cctype>
#include <sstream>
#include <utility>

namespace omv {

LatticeExpr LatticeExpr::hyperbolic() { return LatticeExpr{}; }

LatticeExpr LatticeExpr::root_a(long n) {
  LatticeExpr e;
  e.kind = Kind::A;
  e.index = n;
  return e;
}

LatticeExpr LatticeExpr::root_d(long n) {
  LatticeExpr e;
  e.kind = Kind::D;
  e.index = n;
  return e;
}

LatticeExpr LatticeExpr::root_e(long n) {
  LatticeExpr e;
  e.kind = Kind::E;
  e.index = n;
  return e;
}

LatticeExpr LatticeExpr::rank_one(const Integer& entry) {
  LatticeExpr e;
  e.kind = Kind::Gen;
  e.value = entry;
  return e;
}

LatticeExpr LatticeExpr::s4() {
  LatticeExpr e;
  e.kind = Kind::S4;
  return e;
}

LatticeExpr LatticeExpr::literal(IntMatrix gram) {
  LatticeExpr e;
  e.kind = Kind::Gram;
  e.gram = std::move(gram);
  return e;
}

LatticeExpr LatticeExpr::rescale(LatticeExpr base, const Integer& factor) {
  LatticeExpr e;
  e.kind = Kind::Rescale;
  e.value = factor;
  e.children.push_back(std::move(base));
  return e;
}

LatticeExpr LatticeExpr::power(LatticeExpr atom, long exponent) {
  LatticeExpr e;
  e.kind = Kind::Power;
  e.index = exponent;
  e.children.push_back(std::move(atom));
  return e;
}

LatticeExpr LatticeExpr::sum(std::vector<LatticeExpr> terms) {
  if (terms.size() == 1) return std::move(terms.front());
  LatticeExpr e;
  e.kind = Kind::Sum;
  e.children = std::move(terms);
  return e;
}

bool LatticeExpr::operator==(const LatticeExpr& o) const {
  return kind == o.kind && index == o.index && value == o.value && gram == o.gram && children == o.children;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  LatticeExpr parse() {
    std::vector<LatticeExpr> terms;
    terms.push_back(term());
    for (;;) {
      skip_ws();
      if (accept("+") || accept("\xE2\x8A\x95")) {  // U+2295 circled plus
        terms.push_back(term());
        continue;
      }
      break;
    }
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return LatticeExpr::sum(std::move(terms));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void range_fail(const std::string& msg, std::size_t at) const { throw RangeError(msg, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  bool at_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Integer unsigned_int() {
    if (!at_digit()) fail("expected a number");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  Integer signed_int() {
    skip_ws();
    bool neg = false;
    if (accept("-") || accept("\xE2\x88\x92")) {  // U+2212 minus sign
      neg = true;
    } else {
      accept("+");
    }
    Integer v = unsigned_int();
    return neg ? Integer(-v) : v;
  }

  long small_posint(const char* what) {
    std::size_t at = pos_;
    Integer v = unsigned_int();
    if (v < 1 || v > 100000) range_fail(std::string(what) + " must be a positive integer", at);
    return v.get_si();
  }

  LatticeExpr term() {
    LatticeExpr a = atom();
    if (accept("^")) {
      skip_ws();
      std::size_t at = pos_;
      Integer v = unsigned_int();
      if (v < 1 || v > 100000) range_fail("power exponent must be >= 1", at);
      return LatticeExpr::power(std::move(a), v.get_si());
    }
    return a;
  }

  LatticeExpr atom() {
    LatticeExpr b = base();
    if (accept("(")) {
      skip_ws();
      std::size_t at = pos_;
      Integer f = signed_int();
      if (f == 0) range_fail("rescale factor must be nonzero", at);
      expect(")");
      return LatticeExpr::rescale(std::move(b), f);
    }
    return b;
  }

  LatticeExpr base() {
    skip_ws();
    std::size_t at = pos_;
    if (accept("S4")) return LatticeExpr::s4();
    if (accept("U")) return LatticeExpr::hyperbolic();
    if (accept("A")) {
      long n = small_posint("A index");
      return LatticeExpr::root_a(n);
    }
    if (accept("D")) {
      std::size_t nat = pos_;
      long n = small_posint("D index");
      if (n < 2) range_fail("D(n) requires n >= 2", nat);
      return LatticeExpr::root_d(n);
    }
    if (accept("E")) {
      skip_ws();
      std::size_t nat = pos_;
      Integer n = unsigned_int();
      if (n < 6 || n > 8) range_fail("no root lattice E" + n.get_str() + " (expected E6, E7 or E8)", nat);
      return LatticeExpr::root_e(n.get_si());
    }
    if (accept("<")) {
      skip_ws();
      std::size_t vat = pos_;
      Integer v = signed_int();
      if (v == 0) range_fail("<0> is degenerate", vat);
      if (!mpz_even_p(v.get_mpz_t())) range_fail("<" + v.get_str() + "> is not even", vat);
      expect(">");
      return LatticeExpr::rank_one(v);
    }
    if (text_.substr(pos_, 1) == "[") return gram_literal();
    (void)at;
    if (pos_ >= text_.size()) fail("unexpected end of input");
    fail("unknown lattice name");
  }

  LatticeExpr gram_literal() {
    std::size_t at = pos_;
    expect("[");
    std::vector<std::vector<Integer>> rows;
    do {
      expect("[");
      std::vector<Integer> row;
      row.push_back(signed_int());
      while (accept(",")) row.push_back(signed_int());
      expect("]");
      rows.push_back(std::move(row));
    } while (accept(","));
    expect("]");
    const std::size_t n = rows.size();
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) range_fail("Gram matrix is not square", at);
      for (std::size_t j = 0; j < n; ++j) g(i, j) = rows[i][j];
    }
    if (!g.is_symmetric()) range_fail("Gram matrix is not symmetric", at);
    for (std::size_t i = 0; i < n; ++i)
      if (!mpz_even_p(g(i, i).get_mpz_t())) range_fail("Gram matrix has an odd diagonal entry", at);
    return LatticeExpr::literal(std::move(g));
  }
};

}  // namespace

LatticeExpr parse_lattice(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const LatticeExpr& e) {
  using K = LatticeExpr::Kind;
  switch (e.kind) {
    case K::U: return "U";
    case K::A: return "A" + std::to_string(e.index);
    case K::D: return "D" + std::to_string(e.index);
    case K::E: return "E" + std::to_string(e.index);
    case K::S4: return "S4";
    case K::Gen: return "<" + e.value.get_str() + ">";
    case K::Gram: return to_string(e.gram);
    case K::Rescale: return to_string(e.children.front()) + "(" + e.value.get_str() + ")";
    case K::Power: return to_string(e.children.front()) + "^" + std::to_string(e.index);
    case K::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += " + ";
        s += to_string(e.children[i]);
      }
      return s;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Gram matrices

IntMatrix hyperbolic_gram() { return IntMatrix{{0, 1}, {1, 0}}; }

IntMatrix root_a_gram(long n) {
  if (n < 1) throw LatticeError("A(n) requires n >= 1");
  IntMatrix g(n, n);
  for (long i = 0; i < n; ++i) {
    g(i, i) = 2;
    if (i + 1 < n) g(i, i + 1) = g(i + 1, i) = -1;
  }
  return g;
}

IntMatrix root_d_gram(long n) {
  if (n < 2) throw LatticeError("D(n) requires n >= 2");
  IntMatrix g(n, n);
  for (long i = 0; i < n; ++i) g(i, i) = 2;
  if (n == 2) return g;  // D2 = A1 + A1
  // chain 0 - 1 - ... - (n-2), node n-1 attached to n-3
  for (long i = 0; i + 2 < n; ++i) g(i, i + 1) = g(i + 1, i) = -1;
  g(n - 1, n - 3) = g(n - 3, n - 1) = -1;
  return g;
}

IntMatrix root_e_gram(long n) {
  if (n < 6 || n > 8) throw LatticeError("E(n) requires n in {6,7,8}");
  IntMatrix g(n, n);
  for (long i = 0; i < n; ++i) g(i, i) = 2;
  // chain 0 - ... - (n-2), node n-1 attached to node 2
  for (long i = 0; i + 2 < n; ++i) g(i, i + 1) = g(i + 1, i) = -1;
  g(n - 1, 2) = g(2, n - 1) = -1;
  return g;
}

IntMatrix s4_gram() { return IntMatrix{{2, 1, 2}, {1, -2, 1}, {2, 1, -2}}; }

// ---------------------------------------------------------------------------
// EvenLattice

EvenLattice::EvenLattice(IntMatrix gram, std::size_t u_count) : gram_(std::move(gram)), u_count_(u_count) {
  if (!gram_.is_square()) throw LatticeError("Gram matrix is not square");
  if (!gram_.is_symmetric()) throw LatticeError("Gram matrix is not symmetric");
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    if (!mpz_even_p(gram_(i, i).get_mpz_t())) throw LatticeError("lattice is not even");
  if (u_count_ > gram_.rows() / 2) throw LatticeError("u_count exceeds rank/2");
  det_ = bareiss_determinant(gram_);
  if (det_ == 0) throw LatticeError("Gram matrix is degenerate");
}

namespace {

struct Built {
  IntMatrix gram;
  std::size_t u_count = 0;
};

bool is_plain_u(const LatticeExpr& e) {
  using K = LatticeExpr::Kind;
  if (e.kind == K::U) return true;
  return e.kind == K::Rescale && e.children.front().kind == K::U && abs(e.value) == 1;
}

IntMatrix gram_of(const LatticeExpr& e) {
  using K = LatticeExpr::Kind;
  switch (e.kind) {
    case K::U: return hyperbolic_gram();
    case K::A: return root_a_gram(e.index);
    case K::D: return root_d_gram(e.index);
    case K::E: return root_e_gram(e.index);
    case K::S4: return s4_gram();
    case K::Gen: {
      IntMatrix g(1, 1);
      g(0, 0) = e.value;
      return g;
    }
    case K::Gram: return e.gram;
    case K::Rescale: return gram_of(e.children.front()).scaled(e.value);
    case K::Power: {
      IntMatrix one = gram_of(e.children.front());
      IntMatrix g = one;
      for (long i = 1; i < e.index; ++i) g = block_diagonal(g, one);
      return g;
    }
    case K::Sum: {
      IntMatrix g = gram_of(e.children.front());
      for (std::size_t i = 1; i < e.children.size(); ++i) g = block_diagonal(g, gram_of(e.children[i]));
      return g;
    }
  }
  return {};
}

std::size_t count_u(const LatticeExpr& e) {
  using K = LatticeExpr::Kind;
  if (is_plain_u(e)) return 1;
  if (e.kind == K::Power && is_plain_u(e.children.front())) return static_cast<std::size_t>(e.index);
  if (e.kind == K::Sum) {
    std::size_t n = 0;
    for (const auto& c : e.children) n += count_u(c);
    return n;
  }
  return 0;
}

}  // namespace

EvenLattice build(const LatticeExpr& expr) { return EvenLattice(gram_of(expr), count_u(expr)); }

EvenLattice build(std::string_view text) { return build(parse_lattice(text)); }

EvenLattice direct_sum(const EvenLattice& a, const EvenLattice& b) {
  return EvenLattice(block_diagonal(a.gram(), b.gram()), a.u_count() + b.u_count());
}

EvenLattice rescale(const EvenLattice& lat, const Integer& factor) {
  if (factor == 0) throw LatticeError("rescale factor must be nonzero");
  return EvenLattice(lat.gram().scaled(factor), abs(factor) == 1 ? lat.u_count() : 0);
}

Integer determinant(const EvenLattice& lat) { return lat.det(); }

SignatureInfo signature(const EvenLattice& lat) {
  // Symmetric elimination over Q. A zero diagonal with a nonzero off-diagonal
  // entry a_ij is fixed by e_i <- e_i + e_j, which puts 2 a_ij on the diagonal.
  RatMatrix a = to_rational(lat.gram());
  const std::size_t n = a.rows();
  SignatureInfo s;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, piv) == 0) ++piv;
    if (piv == n) {
      std::size_t oi = n, oj = n;
      for (std::size_t i = k; i < n && oi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            oi = i;
            oj = j;
            break;
          }
      if (oi == n) throw LatticeError("Gram matrix is degenerate");
      a.add_row(oi, oj, Rational(1));
      a.add_col(oi, oj, Rational(1));
      piv = oi;
    }
    a.swap_rows(k, piv);
    a.swap_cols(k, piv);
    const Rational p = a(k, k);
    (p > 0 ? s.n_plus : s.n_minus) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = -a(i, k) / p;
      a.add_row(i, k, f);
      a.add_col(i, k, f);
    }
  }
  return s;
}

EvenLattice normalize_b2(const EvenLattice& lat) {
  const SignatureInfo s = signature(lat);
  if (s.n_minus == 2 && s.n_plus > 2) return lat;
  if (s.n_plus == 2 && s.n_minus > 2) return rescale(lat, Integer(-1));
  std::ostringstream os;
  os << "signature (" << s.n_plus << "," << s.n_minus << ") is not (b,2) or (2,b) with b > 2";
  throw LatticeError(os.str());
}

}  // namespace omv
