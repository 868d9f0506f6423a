#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "omv/matrix.hpp"

namespace omv {

/// Malformed lattice expression. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Syntactically valid expression naming a lattice that does not exist (E9, A0, rescale by 0, ...).
class RangeError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Gram matrix violating an even-lattice invariant, or a signature outside what an operation accepts.
class LatticeError : public Error {
 public:
  using Error::Error;
};

/*
 * Abstract syntax of the lattice DSL.
 *
 *   expr   := term { "+" term }
 *   term   := atom [ "^" posint ]
 *   atom   := base [ "(" int ")" ]
 *   base   := "U" | "A" n | "D" n | "E" n | "<" 2d ">" | "S4" | "[[..],..]"
 *
 * A Sum node always has at least two children, Power and Rescale exactly one.
 */
struct LatticeExpr {
  enum class Kind { U, A, D, E, Gen, S4, Gram, Rescale, Power, Sum };

  Kind kind = Kind::U;
  long index = 0;      // n of A/D/E, exponent of Power
  Integer value;       // Gram entry of Gen, factor of Rescale
  IntMatrix gram;      // literal Gram
  std::vector<LatticeExpr> children;

  static LatticeExpr hyperbolic();
  static LatticeExpr root_a(long n);
  static LatticeExpr root_d(long n);
  static LatticeExpr root_e(long n);
  static LatticeExpr rank_one(const Integer& entry);
  static LatticeExpr s4();
  static LatticeExpr literal(IntMatrix gram);
  static LatticeExpr rescale(LatticeExpr base, const Integer& factor);
  static LatticeExpr power(LatticeExpr atom, long exponent);
  static LatticeExpr sum(std::vector<LatticeExpr> terms);

  bool operator==(const LatticeExpr& o) const;
};

LatticeExpr parse_lattice(std::string_view text);

/// Canonical text form; parse_lattice(to_string(e)) == e.
std::string to_string(const LatticeExpr& expr);

struct SignatureInfo {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;

  /// b when the signature is (b,2); 0 otherwise.
  std::size_t b() const { return n_minus == 2 ? n_plus : 0; }
  int difference() const { return static_cast<int>(n_plus) - static_cast<int>(n_minus); }
  bool operator==(const SignatureInfo&) const = default;
};

/// Nondegenerate even lattice given by its Gram matrix. Immutable.
class EvenLattice {
 public:
  /// Throws LatticeError unless gram is square, symmetric, even on the diagonal,
  /// nondegenerate, and u_count <= rank/2.
  explicit EvenLattice(IntMatrix gram, std::size_t u_count = 0);

  const IntMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }
  std::size_t u_count() const { return u_count_; }
  const Integer& det() const { return det_; }

  /// Copy with a different number of asserted U summands.
  EvenLattice with_u_count(std::size_t u_count) const { return EvenLattice(gram_, u_count); }

  bool operator==(const EvenLattice& o) const { return gram_ == o.gram_ && u_count_ == o.u_count_; }

 private:
  IntMatrix gram_;
  std::size_t u_count_;
  Integer det_;
};

/// Fixed Gram matrices of the named lattices (all positive definite except U).
IntMatrix hyperbolic_gram();
IntMatrix root_a_gram(long n);
IntMatrix root_d_gram(long n);
IntMatrix root_e_gram(long n);
IntMatrix s4_gram();

EvenLattice build(const LatticeExpr& expr);
EvenLattice build(std::string_view text);

/// Orthogonal direct sum; u_counts add.
EvenLattice direct_sum(const EvenLattice& a, const EvenLattice& b);

/// L(d): Gram multiplied by d. u_count survives only for d = +-1.
EvenLattice rescale(const EvenLattice& lat, const Integer& factor);

Integer determinant(const EvenLattice& lat);
SignatureInfo signature(const EvenLattice& lat);

/// Return the lattice in (b,2) orientation: unchanged for (b,2), negated for (2,b).
/// Throws LatticeError for other signatures or b <= 2.
EvenLattice normalize_b2(const EvenLattice& lat);

}  // namespace omv
