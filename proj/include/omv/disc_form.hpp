#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "omv/lattice.hpp"

namespace omv {

/// Reduce x into [0, m) for a positive integer modulus m.
Rational mod_rational(const Rational& x, long m);

/*
 * Finite quadratic module (A_L, qq) of an even lattice, A_L = L^dual / L.
 *
 * A_L is stored as Z/d_1 + ... + Z/d_m (d_i > 1, d_i | d_{i+1}) together with the
 * Gram matrix of the chosen generators: the diagonal holds qq(g_i) = <g_i,g_i> mod 2,
 * the off-diagonal holds b(g_i,g_j) = <g_i,g_j> mod 1. The usual quadratic
 * form is q = qq/2 mod 1.
 *
 * Elements are addressed by their coordinate vector (c_1..c_m), 0 <= c_i < d_i, or by
 * the mixed-radix index of that vector.
 */
class DiscriminantForm {
 public:
  using Element = std::vector<std::int64_t>;

  DiscriminantForm() = default;
  /// generators (coordinates in L tensor Q) are optional; forms read from JSON have none.
  DiscriminantForm(std::vector<Integer> invariant_factors, RatMatrix generator_gram,
                   std::vector<std::vector<Rational>> generators = {});

  const std::vector<Integer>& invariant_factors() const { return factors_; }
  const RatMatrix& generator_gram() const { return gram_; }
  const std::vector<std::vector<Rational>>& generators() const { return generators_; }
  std::size_t length() const { return factors_.size(); }
  Integer order() const;
  bool is_trivial() const { return factors_.empty(); }

  /// Number of elements as a machine integer; throws if the group exceeds `limit`.
  std::uint64_t enumerable_size(std::uint64_t limit) const;

  Element element(std::uint64_t index) const;
  std::uint64_t index_of(const Element& x) const;
  Element add(const Element& x, const Element& y) const;
  Element multiply(std::int64_t k, const Element& x) const;
  std::int64_t element_order(const Element& x) const;

  Rational qq(const Element& x) const;                    // in [0,2)
  Rational q(const Element& x) const;                     // in [0,1)
  Rational b(const Element& x, const Element& y) const;   // in [0,1)

  /// Same group with every value negated: (A, -q).
  DiscriminantForm flipped() const;

  /// Smallest N with N*q = 0 on A.
  Integer level() const;

  /// Split into the orthogonal p-primary parts, one form per prime dividing the order.
  std::vector<std::pair<long, DiscriminantForm>> primary_parts() const;

 private:
  std::vector<Integer> factors_;
  RatMatrix gram_;
  std::vector<std::vector<Rational>> generators_;
};

/// Dense value table of a form: qq(x) = qq_num[x] / denom (mod 2) for every element index x.
struct ValueTable {
  long denom = 1;
  std::vector<std::int64_t> qq_num;   // in [0, 2*denom)
  std::vector<std::int64_t> orders;
};

ValueTable value_table(const DiscriminantForm& df, std::uint64_t limit, long denom = 0);

/// Common denominator of all qq and b values.
long value_denominator(const DiscriminantForm& df);

DiscriminantForm discriminant_form(const EvenLattice& lat);

/// Smallest N with N * G^{-1} integral with even diagonal.
Integer level(const EvenLattice& lat);

DiscriminantForm flip(const DiscriminantForm& df);

/// Isometry test by backtracking over generator images. Orders above 10^4 throw.
bool iso_check(const DiscriminantForm& a, const DiscriminantForm& b);

/// s mod 8 with sum_x exp(pi i qq(x)) = sqrt(|A|) exp(pi i s / 4). Throws Error when no such s exists.
int milgram_signature(const DiscriminantForm& df);

void to_json(nlohmann::json& j, const DiscriminantForm& df);
void from_json(const nlohmann::json& j, DiscriminantForm& df);

}  // namespace omv
