#include <doctest.h>

#include <set>

#include "omv/catalog.hpp"
#include "omv/disc_form.hpp"

using namespace omv;

namespace {

const CatalogRow& row(int id) {
  for (const auto& r : nv_catalog())
    if (r.id == id) return r;
  throw Error("no row");
}

const FamilyResult& family(const std::vector<FamilyResult>& fams, const std::string& name) {
  for (const auto& f : fams)
    if (f.name == name) return f;
  throw Error("no family " + name);
}

}  // namespace

TEST_CASE("r(k) table reproduces") {
  const auto t = run_table1();
  REQUIRE(t.size() == 18);
  for (const auto& e : t) {
    CAPTURE(e.b);
    CHECK(e.match);
  }
  CHECK(t.front().truncated == "45.254");
  CHECK(t[9].truncated == "532.495");
  CHECK(t[15].truncated == "264.000");
}

TEST_CASE("family patterns and verdict ranges") {
  const auto fams = run_table2();
  CHECK(fams.size() == 9);
  for (const auto& f : fams) {
    CAPTURE(f.name);
    CHECK(f.patterns_ok);
  }
  for (const char* name : {"U^2 + A_{2n}^s", "U^2 + D_{2n}^s", "U^2 + E8^s", "U^2 + E7^s", "U^2 + E6^s",
                           "U^2 + A1(-d)"}) {
    CAPTURE(name);
    CHECK(family(fams, name).matches());
  }
  // the printed ranges these computations do not reproduce
  const auto& a_odd = family(fams, "U^2 + A_{2n+1}^s");
  CHECK(a_odd.missing.empty());
  CHECK(a_odd.extra == std::vector<Params>{{4, 1}, {5, 1}, {6, 1}});
  const auto& d_odd = family(fams, "U^2 + D_{2n+1}^s");
  CHECK(d_odd.missing.empty());
  CHECK(d_odd.extra == std::vector<Params>{{3, 2}});
  const auto& e8a1 = family(fams, "U^2 + E8(-1) + A1(-d)");
  CHECK(e8a1.extra.empty());
  CHECK(e8a1.missing == std::vector<Params>{{30}, {33}, {36}});

  std::set<long> holds;
  for (const auto& p : e8a1.holds) holds.insert(p[0]);
  CHECK(holds.count(38) == 1);
  CHECK(holds.count(39) == 0);
  CHECK(*holds.rbegin() == 38);

  const auto& e6 = family(fams, "U^2 + E6^s");
  CHECK(e6.holds == std::vector<Params>{{1}, {2}});
  const auto& a_even = family(fams, "U^2 + A_{2n}^s");
  CHECK(std::count(a_even.holds.begin(), a_even.holds.end(), Params{2, 1}) == 1);
  CHECK(std::count(a_even.holds.begin(), a_even.holds.end(), Params{2, 2}) == 1);
  CHECK(std::count(a_even.holds.begin(), a_even.holds.end(), Params{2, 3}) == 0);
}

TEST_CASE("catalog shape") {
  const auto& cat = nv_catalog();
  CHECK(cat.size() == 55);
  std::size_t with_expr = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat[i].id == static_cast<int>(i) + 1);
    if (cat[i].expr) ++with_expr;
    // dim = 20 - Picard number, k = (22 - Picard number) / 2
    CHECK(cat[i].printed.k.twice == cat[i].printed_dim + 2);
  }
  CHECK(with_expr == 46);
}

TEST_CASE("NS row checks") {
  CHECK(nv_row_check(row(12)) == Triple{8, 4, HalfInt{17}});
  CHECK(nv_row_check(row(1)) == Triple{20, 40, HalfInt{19}});
  CHECK(nv_row_check(row(55)) == Triple{8, 4, HalfInt{7}});
  CHECK_THROWS_AS(nv_row_check(row(2)), Error);

  std::set<int> mismatched;
  for (const auto& r : nv_catalog()) {
    if (!r.expr) continue;
    const Triple t = nv_row_check(r);
    // D and N do not see the sign of the form
    const EvenLattice ns = build(*r.expr);
    CHECK(t.n == discriminant_form(rescale(ns, Integer(-1))).level());
    CHECK(t.d == discriminant_form(ns).order());
    if (!(t == r.printed)) mismatched.insert(r.id);
  }
  CHECK(mismatched == std::set<int>{32, 34, 37});
}

TEST_CASE("NS determinants from component determinants") {
  // det U = -1, det U(m) = -m^2, det A_n = n + 1, det D_n = 4, det E8 = 1; negation flips by (-1)^rank
  CHECK(nv_row_check(row(13)).d == 4 * 8);
  CHECK(nv_row_check(row(14)).d == 16 * 8);
  CHECK(nv_row_check(row(25)).d == 2 * 9);
  CHECK(nv_row_check(row(42)).d == 4 * 3);
  CHECK(nv_row_check(row(52)).d == 16 * 4);
  CHECK(nv_row_check(row(11)).d == 16 * 3);
}

TEST_CASE("verdict table") {
  const auto res = run_nv_table();
  REQUIRE(res.size() == 55);
  std::size_t compared = 0;
  for (const auto& r : res) {
    CAPTURE(r.id);
    if (r.agrees) {
      ++compared;
      CHECK(*r.agrees);
    }
    if (r.c10) {
      // the simplified bound bounds |c10| from below
      CHECK(r.thm11.rhs.lower() <= boost::multiprecision::abs(r.c10->value) + r.c10->error);
    }
  }
  CHECK(compared == 54);
  CHECK(res[0].verdict == Verdict::UniruledProp32);
  CHECK(boost::multiprecision::abs(res[0].c10->value + Real("71.8466167825")) < Real("1e-9"));
  CHECK(res[8].route == "printed-triple");
  CHECK_FALSE(res[8].agrees.has_value());
  CHECK(res[45].verdict == Verdict::Inconclusive);
}

TEST_CASE("analyze") {
  const auto rep = analyze("U^2 + A1(-13)");
  CHECK(rep.verdict == Verdict::UniruledProp32);
  CHECK(boost::multiprecision::abs(rep.c10->value.value - Real("-15.5294117647")) < Real("1e-9"));
  CHECK(rep.u_count == 2);
  CHECK(rep.b == 3);

  const auto edge = analyze("U^2 + E8(-1) + A1(-39)");
  CHECK(edge.thm11.holds == Truth::Fails);
  CHECK(edge.prop32 != Truth::NotApplicable);

  CHECK(analyze("U^2 + A2", {30, std::size_t{0}}).thm11.holds == Truth::NotApplicable);
  CHECK_THROWS_AS(analyze("E8"), LatticeError);
  CHECK_THROWS_AS(analyze("U + ?"), ParseError);
  CHECK_THROWS_AS(analyze("U^2 + A1(-13)", {kMaxDigits + 1, std::nullopt}), PrecisionError);
}

TEST_CASE("report JSON round trip") {
  for (const char* e : {"U^2 + A1(-13)", "U^2 + E8", "U^2 + D4^2", "U^2 + A1(-4000)"}) {
    CAPTURE(e);
    const ReportRecord r = make_record(e, analyze(e));
    const nlohmann::json j = r;
    CHECK(j.at("schema_version") == 1);
    for (const char* key : {"rank", "b", "det", "D", "N", "k", "u_count"}) CHECK(j.at("invariants").contains(key));
    for (const char* key : {"rhs", "margin", "holds"}) CHECK(j.at("thm11").contains(key));
    for (const char* key : {"c10", "error", "margin", "holds"}) CHECK(j.at("prop32").contains(key));
    const ReportRecord back = nlohmann::json::parse(j.dump()).get<ReportRecord>();
    CHECK(back == r);
  }
  nlohmann::json bad = make_record("U^2 + E8", analyze("U^2 + E8"));
  bad["schema_version"] = 99;
  CHECK_THROWS_AS(bad.get<ReportRecord>(), Error);
}

TEST_CASE("CSV output") {
  const std::string t1 = table1_csv(run_table1());
  CHECK(t1.rfind("b,k,r_k,truncated,printed,match\n", 0) == 0);
  CHECK(std::count(t1.begin(), t1.end(), '\n') == 19);

  const std::string nv = nv_csv(run_nv_table());
  CHECK(nv.rfind("row,ns,expr,printed_D,printed_N,printed_k,D,N,k,triple_ok,route,u_assumed,", 0) == 0);
  CHECK(std::count(nv.begin(), nv.end(), '\n') == 56);
  CHECK(nv.find("\"S_{1,1,6}\"") != std::string::npos);
  CHECK(nv.find("\"bound, external\"") != std::string::npos);
}
