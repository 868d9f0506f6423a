#include <doctest.h>

#include "omv/disc_form.hpp"
#include "omv/eisenstein.hpp"
#include "omv/surrogate.hpp"
#include "support.hpp"

using namespace omv;

namespace {

EvenLattice lat(const std::string& s) { return build(parse_lattice(s)); }

int mod8(int x) { return ((x % 8) + 8) % 8; }

// (-1)^n_minus, with n_minus fixed mod 4 by rank and signature mod 8
int det_sign(std::size_t rank, int sig8) {
  const long nm2 = static_cast<long>(rank) - sig8;
  return (nm2 / 2) % 2 == 0 ? 1 : -1;
}

SurrogateSpec spec_of(const EvenLattice& l, std::size_t rank) {
  SurrogateSpec s;
  s.rank = rank;
  s.form = discriminant_form(l);
  s.sig8 = mod8(signature(l).difference());
  s.det = abs(l.det()) * det_sign(rank, s.sig8);
  return s;
}

bool rel_close(const PrecReal& a, const PrecReal& b, const Real& eps) {
  return boost::multiprecision::abs(a.value - b.value) <= eps * boost::multiprecision::abs(b.value);
}

}  // namespace

TEST_CASE("target validation") {
  SurrogateSpec s;
  s.rank = 19;
  s.det = 20;
  s.sig8 = 7;
  s.form = flip(discriminant_form(lat("S4")));
  CHECK_THROWS_AS(validate(s), SurrogateError);  // Milgram gives 1 for the flipped form
  s.form = discriminant_form(lat("S4"));
  CHECK_NOTHROW(validate(s));
  s.det = -20;
  CHECK_THROWS_AS(validate(s), SurrogateError);
  s.det = 40;
  CHECK_THROWS_AS(validate(s), SurrogateError);

  SurrogateSpec t;
  t.rank = 10;
  t.det = 1;
  t.sig8 = 2;
  CHECK_THROWS_AS(validate(t), SurrogateError);
}

TEST_CASE("pad") {
  const EvenLattice s4 = lat("S4");
  CHECK_FALSE(pad(s4, 4, 1, 7).has_value());
  CHECK_FALSE(pad(s4, 2, 1, 7).has_value());
  const auto p = pad(s4, 19, 1, 7);
  REQUIRE(p.has_value());
  CHECK(p->rank() == 19);
  CHECK(p->det() == 20);
  CHECK(signature(*p) == SignatureInfo{17, 2});
  CHECK(p->u_count() == 0);

  // n_minus = 2 reachable with one U on a definite core
  const auto q = pad(lat("A2"), 12, -1, 2);
  REQUIRE(q.has_value());
  CHECK(q->rank() == 12);
  CHECK(signature(*q).n_minus == 1);

  const auto u = pad(std::nullopt, 10, -1, 0);
  REQUIRE(u.has_value());
  CHECK(*u == lat("U + E8"));

  for (int t = 0; t < 30; ++t) {
    const EvenLattice core = testing::random_even_lattice(testing::uniform(1, 4), 6);
    const std::size_t target = core.rank() + 2 * testing::uniform(0, 10);
    for (int sign : {-1, 1})
      for (int s8 = 0; s8 < 8; ++s8) {
        const auto r = pad(core, target, sign, s8);
        if (!r) continue;
        CHECK(r->rank() == target);
        CHECK(sgn(r->det()) == sign);
        CHECK(mod8(signature(*r).difference()) == s8);
        CHECK(iso_check(discriminant_form(*r), discriminant_form(core)));
      }
  }
}

TEST_CASE("trivial form needs no core") {
  SurrogateSpec s;
  s.rank = 10;
  s.det = -1;
  s.sig8 = 0;
  SearchStats st;
  const EvenLattice l = find_surrogate(s, &st);
  CHECK(l == lat("U + E8"));
  CHECK(st.candidates == 0);
}

TEST_CASE("surrogate for the S4 complement") {
  SurrogateSpec s;
  s.rank = 19;
  s.det = 20;
  s.sig8 = 7;
  s.form = discriminant_form(lat("S4"));
  s.core_rank_max = 3;
  const EvenLattice l = find_surrogate(s);
  CHECK(l.rank() == 19);
  CHECK(l.det() == 20);
  CHECK(mod8(signature(l).difference()) == 7);
  const auto c = c10_from_genus(l, 40);
  const Real want = Real(-5912665925814LL) / Real(82295676409LL);
  CHECK(boost::multiprecision::abs(c.value.value - want) < Real("1e-25"));
  const auto rep = genus_verdict(l);
  CHECK(rep.b == 17);
  CHECK(rep.verdict == Verdict::UniruledProp32);
}

TEST_CASE("surrogates from distinct cores agree") {
  for (const char* src : {"S4", "A2", "A1(-5) + A1", "A3", "<6>"}) {
    CAPTURE(src);
    const EvenLattice base = lat(src);
    const SurrogateSpec s = spec_of(base, base.rank() + 8);
    const auto found = find_surrogates(s, 3);
    REQUIRE(found.size() >= 2);
    const auto ref = c10_from_genus(found.front(), 40).value;
    for (const auto& l : found) {
      CHECK(l.rank() == s.rank);
      CHECK(l.det() == s.det);
      CHECK(iso_check(discriminant_form(l), s.form));
      CHECK(rel_close(c10_from_genus(l, 40).value, ref, Real("1e-9")));
    }
  }
}

TEST_CASE("surrogate of a known lattice reproduces its coefficient") {
  for (const char* src : {"U^2 + A1(-13)", "U^2 + A2", "U^2 + D4", "U + U(2) + A1", "U^2 + E8(-1) + A1(-13)"}) {
    CAPTURE(src);
    const EvenLattice l = normalize_b2(lat(src));
    const SurrogateSpec s = spec_of(l, l.rank());
    const EvenLattice sur = find_surrogate(s);
    CHECK(rel_close(c10_from_genus(sur).value, c10_coefficient(l).value, Real("1e-9")));
  }
}

TEST_CASE("search exhaustion is reported") {
  SurrogateSpec s;
  s.form = discriminant_form(lat("A1(97)"));
  s.rank = 9;
  s.sig8 = milgram_signature(s.form);
  s.det = 194 * det_sign(s.rank, s.sig8);
  s.core_rank_max = 1;
  s.entry_bound = 8;
  try {
    find_surrogate(s);
    FAIL("expected exhaustion");
  } catch (const SurrogateError& e) {
    CHECK(std::string(e.what()).find("no surrogate found") != std::string::npos);
  }
}

TEST_CASE("target JSON round trip") {
  SurrogateSpec s;
  s.rank = 19;
  s.det = 20;
  s.sig8 = 7;
  s.form = discriminant_form(lat("S4"));
  const nlohmann::json j = s;
  const SurrogateSpec t = j.get<SurrogateSpec>();
  CHECK(t.rank == s.rank);
  CHECK(t.det == s.det);
  CHECK(t.sig8 == s.sig8);
  CHECK(iso_check(t.form, s.form));
  CHECK(nlohmann::json(t) == j);
}
