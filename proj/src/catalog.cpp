#include "omv/catalog.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "omv/disc_form.hpp"
#include "omv/surrogate.hpp"

namespace omv {

std::string to_string(const Triple& t) {
  return "(" + t.d.get_str() + ", " + t.n.get_str() + ", " + to_string(t.k) + ")";
}

std::string to_string(const Params& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

namespace {

Integer ipow(long base, long e) { return power(base, static_cast<unsigned long>(e)); }

Triple triple_of(const EvenLattice& lat) {
  return {abs(lat.det()), level(lat), HalfInt{static_cast<long>(lat.rank())}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::vector<std::string> q;
  for (const auto& f : fields) q.push_back(csv_field(f));
  return join(q, ",") + "\n";
}

nlohmann::json triple_json(const Triple& t) {
  return {{"D", t.d.get_str()}, {"N", t.n.get_str()}, {"k", to_string(t.k)}};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Table1Entry> run_table1(int digits) {
  static const char* printed[] = {"45.254",  "103.177", "155.642", "240.000", "310.318", "393.495",
                                  "452.255", "504.000", "526.601", "532.495", "513.576", "480.000",
                                  "432.083", "377.769", "320.054", "264.000", "211.894", "165.959"};
  std::vector<Table1Entry> out;
  for (long b = 3; b <= 20; ++b) {
    Table1Entry e;
    e.b = b;
    e.k = weight_for_b(b);
    e.r = r_of_k(b, digits);
    e.truncated = truncate3(e.r);
    e.printed = printed[b - 3];
    e.match = e.truncated == e.printed;
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Family {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<Params> domain;
  std::function<std::string(const Params&)> expr;
  std::function<Triple(const Params&)> pattern;
  std::vector<Params> printed;
};

constexpr long kMaxRank = 64;

std::vector<Params> grid(long n_lo, long n_hi, long s_lo, long s_hi, const std::function<long(long, long)>& rank) {
  std::vector<Params> out;
  for (long n = n_lo; n <= n_hi; ++n)
    for (long s = s_lo; s <= s_hi; ++s)
      if (rank(n, s) <= kMaxRank) out.push_back({n, s});
  return out;
}

std::vector<Params> line(long lo, long hi) {
  std::vector<Params> out;
  for (long d = lo; d <= hi; ++d) out.push_back({d});
  return out;
}

std::string power_term(const std::string& atom, long s) { return s == 1 ? atom : atom + "^" + std::to_string(s); }

const std::vector<Family>& families() {
  static const std::vector<Family> fams = [] {
    std::vector<Family> f;
    f.push_back({"U^2 + A_{2n+1}^s",
                 {"n", "s"},
                 grid(0, 9, 1, 8, [](long n, long s) { return 4 + (2 * n + 1) * s; }),
                 [](const Params& p) { return "U^2 + " + power_term("A" + std::to_string(2 * p[0] + 1), p[1]); },
                 [](const Params& p) {
                   return Triple{ipow(2 * p[0] + 2, p[1]), 4 * (p[0] + 1), HalfInt{(2 * p[0] + 1) * p[1] + 4}};
                 },
                 {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}}});
    f.push_back({"U^2 + A_{2n}^s",
                 {"n", "s"},
                 grid(1, 9, 1, 8, [](long n, long s) { return 4 + 2 * n * s; }),
                 [](const Params& p) { return "U^2 + " + power_term("A" + std::to_string(2 * p[0]), p[1]); },
                 [](const Params& p) {
                   return Triple{ipow(2 * p[0] + 1, p[1]), 2 * p[0] + 1, HalfInt{2 * p[0] * p[1] + 4}};
                 },
                 {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}});
    f.push_back({"U^2 + D_{2n+1}^s",
                 {"n", "s"},
                 grid(2, 9, 1, 8, [](long n, long s) { return 4 + (2 * n + 1) * s; }),
                 [](const Params& p) { return "U^2 + " + power_term("D" + std::to_string(2 * p[0] + 1), p[1]); },
                 [](const Params& p) { return Triple{ipow(4, p[1]), 8, HalfInt{(2 * p[0] + 1) * p[1] + 4}}; },
                 {{2, 1}, {2, 2}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}}});
    f.push_back({"U^2 + D_{2n}^s",
                 {"n", "s"},
                 grid(2, 9, 1, 8, [](long n, long s) { return 4 + 2 * n * s; }),
                 [](const Params& p) { return "U^2 + " + power_term("D" + std::to_string(2 * p[0]), p[1]); },
                 [](const Params& p) {
                   return Triple{ipow(4, p[1]), p[0] % 2 == 1 ? 4 : 2, HalfInt{2 * p[0] * p[1] + 4}};
                 },
                 {{2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}, {2, 2}, {3, 2}}});
    f.push_back({"U^2 + E8^s", {"s"}, line(1, 7),
                 [](const Params& p) { return "U^2 + " + power_term("E8", p[0]); },
                 [](const Params& p) { return Triple{1, 1, HalfInt{8 * p[0] + 4}}; },
                 {{1}, {2}}});
    f.push_back({"U^2 + E7^s", {"s"}, line(1, 8),
                 [](const Params& p) { return "U^2 + " + power_term("E7", p[0]); },
                 [](const Params& p) { return Triple{ipow(2, p[0]), 4, HalfInt{7 * p[0] + 4}}; },
                 {{1}, {2}}});
    f.push_back({"U^2 + E6^s", {"s"}, line(1, 8),
                 [](const Params& p) { return "U^2 + " + power_term("E6", p[0]); },
                 [](const Params& p) { return Triple{ipow(3, p[0]), 3, HalfInt{6 * p[0] + 4}}; },
                 {{1}, {2}}});
    f.push_back({"U^2 + A1(-d)", {"d"}, line(1, 60),
                 [](const Params& p) { return "U^2 + A1(-" + std::to_string(p[0]) + ")"; },
                 [](const Params& p) { return Triple{2 * p[0], 4 * p[0], HalfInt{5}}; },
                 line(1, 4)});
    f.push_back({"U^2 + E8(-1) + A1(-d)", {"d"}, line(1, 60),
                 [](const Params& p) { return "U^2 + E8(-1) + A1(-" + std::to_string(p[0]) + ")"; },
                 [](const Params& p) { return Triple{2 * p[0], 4 * p[0], HalfInt{13}}; },
                 line(1, 38)});
    return f;
  }();
  return fams;
}

}  // namespace

std::vector<FamilyResult> run_table2(int digits) {
  std::vector<FamilyResult> out;
  for (const auto& fam : families()) {
    FamilyResult r;
    r.name = fam.name;
    r.param_names = fam.param_names;
    r.printed = fam.printed;
    const std::set<Params> printed(fam.printed.begin(), fam.printed.end());
    for (const auto& p : fam.domain) {
      FamilyInstance inst;
      inst.params = p;
      inst.expr = fam.expr(p);
      inst.pattern = fam.pattern(p);
      inst.computed = triple_of(normalize_b2(build(inst.expr)));
      inst.pattern_ok = inst.pattern == inst.computed;
      r.patterns_ok = r.patterns_ok && inst.pattern_ok;
      inst.thm11 = thm11_verdict(inst.computed.d, inst.computed.n, inst.computed.k.twice - 2, 2, digits);
      inst.printed = printed.count(p) > 0;
      if (inst.thm11.holds == Truth::Holds) {
        r.holds.push_back(p);
        if (!inst.printed) r.extra.push_back(p);
      } else if (inst.printed) {
        r.missing.push_back(p);
      }
      r.instances.push_back(std::move(inst));
    }
    // printed parameters outside the scanned domain count as missing
    for (const auto& p : fam.printed)
      if (std::find(fam.domain.begin(), fam.domain.end(), p) == fam.domain.end()) r.missing.push_back(p);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<CatalogRow>& nv_catalog() {
  static const std::vector<CatalogRow> rows = [] {
    const std::string z2 = "Z/2", one = "{1}", z22 = "(Z/2)^2";
    auto tri = [](long d, long n, long twice_k) { return Triple{d, n, HalfInt{twice_k}}; };
    std::vector<CatalogRow> r = {
        {1, "S_4", "S4", tri(20, 40, 19), "coefficient", 17, z2},
        {2, "S_{1,1,6}", std::nullopt, tri(72, 36, 19), "?", 17, z2},
        {3, "S_{1,1,8}", std::nullopt, tri(128, 64, 19), "?", 17, one},
        {4, "S_{1,9,1}", std::nullopt, tri(162, 108, 19), "?", 17, one},
        {5, "S_{7,1,1}", std::nullopt, tri(98, 14, 19), "?", 17, one},
        {6, "S_{10,1,1}", std::nullopt, tri(200, 20, 19), "?", 17, z2},
        {7, "S_{12,1,1}", std::nullopt, tri(288, 12, 19), "?", 17, one},
        {8, "S'_{4,1,2}", std::nullopt, tri(32, 8, 19), "?", 17, z2},
        {9, "L(24)", std::nullopt, tri(28, 14, 18), "coefficient", 16, z2},
        {10, "L(27)", std::nullopt, tri(60, 30, 18), "?", 16, z2},
        {11, "[4]+[-4]+A2(-1)", "<4> + <-4> + A2(-1)", tri(48, 24, 18), "?", 16, z2},
        {12, "U+A1(-1)^3", "U + A1(-1)^3", tri(8, 4, 17), "bound", 15, z2},
        {13, "U(2)+A1(-1)^3", "U(2) + A1(-1)^3", tri(32, 4, 17), "coefficient", 15, z2},
        {14, "U(4)+A1(-1)^3", "U(4) + A1(-1)^3", tri(128, 4, 17), "?", 15, z2},
        {15, "[4]+D4(-1)", "<4> + D4(-1)", tri(16, 8, 17), "bound", 15, z2},
        {16, "[8]+D4(-1)", "<8> + D4(-1)", tri(32, 16, 17), "coefficient", 15, z2},
        {17, "[16]+D4(-1)", "<16> + D4(-1)", tri(64, 32, 17), "?", 15, z2},
        {18, "U(4)+D4(-1)", "U(4) + D4(-1)", tri(64, 4, 16), "coefficient", 14, z2},
        {19, "U+A4(-1)", "U + A4(-1)", tri(5, 5, 16), "bound", 14, z2},
        {20, "U+A1(-1)+A3(-1)", "U + A1(-1) + A3(-1)", tri(8, 8, 16), "bound", 14, z2},
        {21, "U+A2(-1)^2", "U + A2(-1)^2", tri(9, 3, 16), "bound", 14, z2},
        {22, "U+A1(-1)^2+A2(-1)", "U + A1(-1)^2 + A2(-1)", tri(12, 12, 16), "bound", 14, z2},
        {23, "U+A1(-1)^4", "U + A1(-1)^4", tri(16, 4, 16), "bound", 14, z2},
        {24, "U+D4(-1)+A1(-1)", "U + D4(-1) + A1(-1)", tri(8, 4, 15), "bound", 13, z2},
        {25, "U+A1(-1)+A2(-1)^2", "U + A1(-1) + A2(-1)^2", tri(18, 12, 15), "bound", 13, z2},
        {26, "U+A1(-1)^2+A3(-1)", "U + A1(-1)^2 + A3(-1)", tri(16, 8, 15), "bound", 13, z2},
        {27, "U+A2(-1)+A3(-1)", "U + A2(-1) + A3(-1)", tri(12, 24, 15), "bound", 13, z2},
        {28, "U+A1(-1)+A4(-1)", "U + A1(-1) + A4(-1)", tri(10, 20, 15), "bound", 13, z2},
        {29, "U+A5(-1)", "U + A5(-1)", tri(6, 12, 15), "bound", 13, z2},
        {30, "U+D6(-1)", "U + D6(-1)", tri(4, 4, 14), "bound", 12, z2},
        {31, "U+D4(-1)+A1(-1)^2", "U + D4(-1) + A1(-1)^2", tri(16, 4, 14), "bound", 12, z2},
        {32, "U+A2(-1)^3", "U + A2(-1)^3", tri(27, 8, 14), "bound", 12, z2},
        {33, "U+A3(-1)^2", "U + A3(-1)^2", tri(16, 8, 14), "bound", 12, z2},
        {34, "U+A2(-1)+A4(-1)", "U + A2(-1) + A4(-1)", tri(15, 30, 14), "bound", 12, z2},
        {35, "U+A1(-1)+A5(-1)", "U + A1(-1) + A5(-1)", tri(12, 12, 14), "bound", 12, z2},
        {36, "U+A6(-1)", "U + A6(-1)", tri(7, 7, 14), "bound", 12, z2},
        {37, "U+D5(-1)+A1(-1)", "U + D5(-1) + A1(-1)", tri(8, 4, 14), "bound", 12, z2},
        {38, "U+D6(-1)+A1(-1)", "U + D6(-1) + A1(-1)", tri(8, 4, 13), "bound", 11, z2},
        {39, "U+D4(-1)+A1(-1)^3", "U + D4(-1) + A1(-1)^3", tri(32, 4, 13), "bound", 11, z2},
        {40, "U+A7(-1)", "U + A7(-1)", tri(8, 16, 13), "bound", 11, z2},
        {41, "U+D4(-1)+A3(-1)", "U + D4(-1) + A3(-1)", tri(16, 8, 13), "bound", 11, z2},
        {42, "U+D5(-1)+A2(-1)", "U + D5(-1) + A2(-1)", tri(12, 24, 13), "bound", 11, z2},
        {43, "U+D7(-1)", "U + D7(-1)", tri(4, 8, 13), "bound", 11, z2},
        {44, "U+D8(-1)", "U + D8(-1)", tri(4, 2, 12), "bound", 10, z2},
        {45, "U+D6(-1)+A1(-1)^2", "U + D6(-1) + A1(-1)^2", tri(16, 4, 12), "bound", 10, z2},
        {46, "U+A1(-1)^8", "U + A1(-1)^8", tri(256, 4, 12), "?", 10, z22},
        {47, "U+D8(-1)+A1(-1)", "U + D8(-1) + A1(-1)", tri(8, 4, 11), "bound", 9, z2},
        {48, "U+D4(-1)^2+A1(-1)", "U + D4(-1)^2 + A1(-1)", tri(32, 4, 11), "bound", 9, z2},
        {49, "U+D4(-1)+A1(-1)^5", "U + D4(-1) + A1(-1)^5", tri(128, 4, 11), "coefficient", 9, z22},
        {50, "U+E8(-1)+A1(-1)^2", "U + E8(-1) + A1(-1)^2", tri(4, 4, 10), "bound", 8, z2},
        {51, "U+D8(-1)+A1(-1)^2", "U + D8(-1) + A1(-1)^2", tri(16, 4, 10), "bound", 8, z2},
        {52, "U+D4(-1)^2+A1(-1)^2", "U + D4(-1)^2 + A1(-1)^2", tri(64, 4, 10), "bound", 8, z22},
        {53, "U+E8(-1)+A3(-1)", "U + E8(-1) + A3(-1)", tri(4, 8, 9), "bound", 7, z2},
        {54, "U+E8(-1)+A1(-1)^4", "U + E8(-1) + A1(-1)^4", tri(16, 4, 8), "bound, external", 6, z22},
        {55, "U+E8(-1)+D4(-1)+A1(-1)", "U + E8(-1) + D4(-1) + A1(-1)", tri(8, 4, 7), "bound, external", 5, z22},
    };
    return r;
  }();
  return rows;
}

Triple nv_row_check(const CatalogRow& row) {
  if (!row.expr) throw Error("row " + std::to_string(row.id) + " has no Gram matrix");
  const EvenLattice ns = build(*row.expr);
  const auto sig = signature(ns);
  if (sig.n_plus != 1) throw LatticeError("row " + std::to_string(row.id) + ": NS lattice is not hyperbolic");
  if (ns.rank() > 20) throw LatticeError("row " + std::to_string(row.id) + ": Picard number above 20");
  return {abs(ns.det()), level(ns), HalfInt{22 - static_cast<long>(ns.rank())}};
}

namespace {

Verdict expected_verdict(const std::string& printed) {
  if (printed == "coefficient") return Verdict::UniruledProp32;
  if (printed == "?") return Verdict::Inconclusive;
  return Verdict::UniruledThm11;
}

// NS lattice with a leading U summand removed, when it has one
std::optional<EvenLattice> strip_u(const LatticeExpr& e) {
  using K = LatticeExpr::Kind;
  if (e.kind != K::Sum || e.children.empty() || e.children.front().kind != K::U) return std::nullopt;
  std::vector<LatticeExpr> rest(e.children.begin() + 1, e.children.end());
  if (rest.size() == 1) return build(rest.front());
  return build(LatticeExpr::sum(std::move(rest)));
}

void decide_thm11(NvResult& r, const Triple& t, long b, int digits) {
  const auto one = thm11_verdict(t.d, t.n, b, 1, digits);
  const auto two = thm11_verdict(t.d, t.n, b, 2, digits);
  if (one.holds != Truth::Holds && two.holds == Truth::Holds) {
    r.thm11 = two;
    r.u_assumed = 2;
    r.flags.push_back("assumes U^2 splits off L_perp");
  } else {
    r.thm11 = one;
    r.u_assumed = 1;
  }
}

}  // namespace

std::vector<NvResult> run_nv_table(int digits) {
  std::vector<NvResult> out;
  for (const auto& row : nv_catalog()) {
    NvResult r;
    r.id = row.id;
    const long b = row.printed.k.twice - 2;
    if (!row.expr) {
      r.route = "printed-triple";
      r.flags.push_back("gram_unavailable");
      decide_thm11(r, row.printed, b, digits);
      if (r.thm11.holds == Truth::Holds)
        r.verdict = Verdict::UniruledThm11;
      if (expected_verdict(row.printed_verdict) == Verdict::UniruledProp32)
        r.flags.push_back("coefficient criterion needs a Gram matrix; not evaluated");
      else
        r.agrees = r.verdict == expected_verdict(row.printed_verdict);
      out.push_back(std::move(r));
      continue;
    }

    const Triple t = nv_row_check(row);
    r.computed = t;
    r.triple_ok = t == row.printed;
    if (!r.triple_ok) r.flags.push_back("printed triple " + to_string(row.printed) + " differs");
    const long bt = t.k.twice - 2;
    decide_thm11(r, t, bt, digits);

    const LatticeExpr ex = parse_lattice(*row.expr);
    const EvenLattice ns = build(ex);
    SurrogateSpec spec;
    spec.rank = static_cast<std::size_t>(t.k.twice);
    spec.det = t.d;  // L_perp(-1) has signature (20 - rho, 2)
    spec.sig8 = static_cast<int>(((bt - 2) % 8 + 8) % 8);
    spec.form = discriminant_form(ns);
    spec.time_budget = std::chrono::milliseconds(20000);
    spec.seeds.push_back(ns);
    if (auto s = strip_u(ex)) spec.seeds.push_back(*s);
    try {
      SearchStats st;
      const EvenLattice sur = find_surrogate(spec, &st);
      r.route = st.candidates == 0 ? "ns-padding" : "surrogate-search";
      const auto rep = genus_verdict(sur.with_u_count(0), digits);
      r.c10 = rep.c10->value;
      r.prop32 = rep.prop32;
    } catch (const SurrogateError& e) {
      r.route = "none";
      r.flags.push_back(std::string("no surrogate: ") + e.what());
    }
    if (r.thm11.holds == Truth::Holds)
      r.verdict = Verdict::UniruledThm11;
    else if (r.prop32 == Truth::Holds)
      r.verdict = Verdict::UniruledProp32;
    r.agrees = r.verdict == expected_verdict(row.printed_verdict);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

CriterionReport analyze(const std::string& expr, const AnalyzeOptions& opts) {
  EvenLattice lat = normalize_b2(build(parse_lattice(expr)));
  if (opts.assert_u) lat = lat.with_u_count(*opts.assert_u);
  return prop32_verdict(lat, opts.digits, opts.conv);
}

ReportRecord make_record(const std::string& input, const CriterionReport& rep, int out_digits) {
  ReportRecord r;
  r.input = input;
  r.rank = rep.rank;
  r.b = rep.b;
  r.det = rep.det.get_str();
  r.d = rep.d.get_str();
  r.n = rep.n.get_str();
  r.k = to_string(rep.k);
  r.u_count = rep.u_count;
  r.thm11_rhs = rep.thm11.rhs.str(out_digits);
  r.thm11_margin = rep.thm11.margin.str(out_digits);
  r.thm11_holds = to_string(rep.thm11.holds);
  if (rep.c10) {
    r.c10 = rep.c10->value.str(out_digits);
    r.c10_error = rep.c10->value.error.str(3);
  }
  r.prop32_margin = rep.prop32_margin.str(out_digits);
  r.prop32_holds = to_string(rep.prop32);
  r.verdict = to_string(rep.verdict);
  return r;
}

void to_json(nlohmann::json& j, const ReportRecord& r) {
  j = nlohmann::json{
      {"schema_version", r.schema_version},
      {"input", r.input},
      {"invariants",
       {{"rank", r.rank}, {"b", r.b}, {"det", r.det}, {"D", r.d}, {"N", r.n}, {"k", r.k}, {"u_count", r.u_count}}},
      {"thm11", {{"rhs", r.thm11_rhs}, {"margin", r.thm11_margin}, {"holds", r.thm11_holds}}},
      {"prop32", {{"c10", r.c10}, {"error", r.c10_error}, {"margin", r.prop32_margin}, {"holds", r.prop32_holds}}},
      {"verdict", r.verdict}};
}

void from_json(const nlohmann::json& j, ReportRecord& r) {
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != ReportRecord::kSchemaVersion)
    throw Error("unsupported report schema version " + std::to_string(r.schema_version));
  r.input = j.at("input").get<std::string>();
  const auto& inv = j.at("invariants");
  r.rank = inv.at("rank").get<std::size_t>();
  r.b = inv.at("b").get<long>();
  r.det = inv.at("det").get<std::string>();
  r.d = inv.at("D").get<std::string>();
  r.n = inv.at("N").get<std::string>();
  r.k = inv.at("k").get<std::string>();
  r.u_count = inv.at("u_count").get<std::size_t>();
  const auto& t = j.at("thm11");
  r.thm11_rhs = t.at("rhs").get<std::string>();
  r.thm11_margin = t.at("margin").get<std::string>();
  r.thm11_holds = t.at("holds").get<std::string>();
  const auto& p = j.at("prop32");
  r.c10 = p.at("c10").get<std::string>();
  r.c10_error = p.at("error").get<std::string>();
  r.prop32_margin = p.at("margin").get<std::string>();
  r.prop32_holds = p.at("holds").get<std::string>();
  r.verdict = j.at("verdict").get<std::string>();
}

// ---------------------------------------------------------------------------

std::string table1_csv(const std::vector<Table1Entry>& rows) {
  std::string s = csv_row({"b", "k", "r_k", "truncated", "printed", "match"});
  for (const auto& e : rows)
    s += csv_row({std::to_string(e.b), to_string(e.k), e.r.str(12), e.truncated, e.printed, e.match ? "1" : "0"});
  return s;
}

std::string table2_csv(const std::vector<FamilyResult>& fams) {
  std::string s = csv_row({"family", "params", "expr", "D", "N", "k", "pattern_ok", "rhs", "four_b", "holds",
                           "printed"});
  for (const auto& f : fams)
    for (const auto& i : f.instances)
      s += csv_row({f.name, to_string(i.params), i.expr, i.computed.d.get_str(), i.computed.n.get_str(),
                    to_string(i.computed.k), i.pattern_ok ? "1" : "0", i.thm11.rhs.str(10),
                    std::to_string(4 * (i.computed.k.twice - 2)), to_string(i.thm11.holds), i.printed ? "1" : "0"});
  return s;
}

std::string nv_csv(const std::vector<NvResult>& rows) {
  std::string s = csv_row({"row", "ns", "expr", "printed_D", "printed_N", "printed_k", "D", "N", "k", "triple_ok",
                           "route", "u_assumed", "thm11_rhs", "thm11", "c10", "prop32", "verdict",
                           "printed_verdict", "agrees", "flags"});
  const auto& cat = nv_catalog();
  for (const auto& r : rows) {
    const auto& row = *std::find_if(cat.begin(), cat.end(), [&](const CatalogRow& c) { return c.id == r.id; });
    s += csv_row({std::to_string(r.id), row.ns_name, row.expr.value_or(""), row.printed.d.get_str(),
                  row.printed.n.get_str(), to_string(row.printed.k), r.computed ? r.computed->d.get_str() : "",
                  r.computed ? r.computed->n.get_str() : "", r.computed ? to_string(r.computed->k) : "",
                  r.computed ? (r.triple_ok ? "1" : "0") : "", r.route, std::to_string(r.u_assumed),
                  r.thm11.rhs.str(10), to_string(r.thm11.holds), r.c10 ? r.c10->str(12) : "", to_string(r.prop32),
                  to_string(r.verdict), row.printed_verdict, r.agrees ? (*r.agrees ? "1" : "0") : "",
                  join(r.flags, "; ")});
  }
  return s;
}

nlohmann::json table1_json(const std::vector<Table1Entry>& rows) {
  auto a = nlohmann::json::array();
  for (const auto& e : rows)
    a.push_back({{"b", e.b}, {"k", to_string(e.k)}, {"r_k", e.r.str(20)}, {"truncated", e.truncated},
                 {"printed", e.printed}, {"match", e.match}});
  return {{"schema_version", ReportRecord::kSchemaVersion}, {"table", "r_k"}, {"rows", a}};
}

nlohmann::json table2_json(const std::vector<FamilyResult>& fams) {
  auto a = nlohmann::json::array();
  for (const auto& f : fams) {
    auto inst = nlohmann::json::array();
    for (const auto& i : f.instances)
      inst.push_back({{"params", i.params}, {"expr", i.expr}, {"triple", triple_json(i.computed)},
                      {"pattern_ok", i.pattern_ok}, {"rhs", i.thm11.rhs.str(15)},
                      {"holds", to_string(i.thm11.holds)}, {"printed", i.printed}});
    a.push_back({{"family", f.name}, {"param_names", f.param_names}, {"holds", f.holds}, {"printed", f.printed},
                 {"extra", f.extra}, {"missing", f.missing}, {"patterns_ok", f.patterns_ok},
                 {"matches", f.matches()}, {"instances", inst}});
  }
  return {{"schema_version", ReportRecord::kSchemaVersion}, {"table", "families"}, {"families", a}};
}

nlohmann::json nv_json(const std::vector<NvResult>& rows) {
  auto a = nlohmann::json::array();
  const auto& cat = nv_catalog();
  for (const auto& r : rows) {
    const auto& row = *std::find_if(cat.begin(), cat.end(), [&](const CatalogRow& c) { return c.id == r.id; });
    nlohmann::json j = {{"row", r.id},
                        {"ns", row.ns_name},
                        {"printed_triple", triple_json(row.printed)},
                        {"route", r.route},
                        {"u_assumed", r.u_assumed},
                        {"thm11", {{"rhs", r.thm11.rhs.str(15)}, {"holds", to_string(r.thm11.holds)}}},
                        {"prop32", to_string(r.prop32)},
                        {"verdict", to_string(r.verdict)},
                        {"printed_verdict", row.printed_verdict},
                        {"flags", r.flags}};
    if (row.expr) j["expr"] = *row.expr;
    if (r.computed) {
      j["triple"] = triple_json(*r.computed);
      j["triple_ok"] = r.triple_ok;
    }
    if (r.c10) j["c10"] = r.c10->str(15);
    if (r.agrees) j["agrees"] = *r.agrees;
    a.push_back(std::move(j));
  }
  return {{"schema_version", ReportRecord::kSchemaVersion}, {"table", "nikulin_vinberg"}, {"rows", a}};
}

}  // namespace omv
