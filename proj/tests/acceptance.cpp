#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "omv/catalog.hpp"
#include "omv/disc_form.hpp"
#include "omv/local_counts.hpp"
#include "omv/surrogate.hpp"
#include "support.hpp"

using namespace omv;
using boost::multiprecision::abs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_s;  // wall-clock limit, 0 for none
  std::function<Outcome()> run;
};

bool rel_close(const Real& a, const Real& b, const Real& eps) { return abs(a - b) <= eps * abs(b); }

int det_sign(std::size_t rank, int sig8) { return ((static_cast<long>(rank) - sig8) / 2) % 2 == 0 ? 1 : -1; }

SurrogateSpec spec_of(const EvenLattice& l, std::size_t rank) {
  SurrogateSpec s;
  s.rank = rank;
  s.form = discriminant_form(l);
  s.sig8 = ((signature(l).difference() % 8) + 8) % 8;
  s.det = abs(l.det()) * det_sign(rank, s.sig8);
  return s;
}

Outcome table1() {
  const auto t = run_table1();
  std::size_t ok = 0;
  std::ostringstream bad;
  for (const auto& e : t) {
    if (e.match) ++ok;
    else bad << " b=" << e.b << " got " << e.truncated << " printed " << e.printed;
  }
  return {ok == t.size() && t.size() == 18, std::to_string(ok) + "/" + std::to_string(t.size()) + " entries match" +
                                                bad.str()};
}

Outcome worked_coefficient() {
  const auto c = c10_coefficient(normalize_b2(build("U^2 + A1(-13)")));
  const Real expected = Real(-264) / 17;
  const Real rel = abs(c.value.value - expected) / abs(expected);
  return {rel <= Real("1e-9"), "c10 = " + c.value.str(15) + ", relative error " + rel.str(3)};
}

Outcome worked_bound() {
  const auto t = thm11_verdict(8, 4, 15, 2);
  const Real arch = (t.r_k / sqrt(PrecReal::exact(Rational(8)))).value;
  const bool arch_ok = abs(arch - Real("152.7645688")) < Real("5e-8");
  const bool c_ok = t.c_nk == Rational(16384, 21845);
  const bool holds = t.holds == Truth::Holds;
  return {arch_ok && c_ok && holds, "r(k)/sqrt(D) = " + PrecReal(arch).str(12) + ", C(N,k) = " + t.c_nk.get_str() +
                                        ", 60 < " + t.rhs.str(10) + " " + to_string(t.holds)};
}

Outcome surrogate_row() {
  SurrogateSpec s;
  s.rank = 19;
  s.det = 20;
  s.sig8 = 7;
  s.form = discriminant_form(build("S4"));
  SearchStats st;
  const EvenLattice l = find_surrogate(s, &st);
  const auto rep = genus_verdict(l);
  const Real ref("-71.8466167825");
  const bool close = rel_close(rep.c10->value.value, ref, Real("1e-6"));
  return {close && rep.verdict == Verdict::UniruledProp32,
          "core search visited " + std::to_string(st.candidates) + " cores; c10 = " + rep.c10->value.str(12) +
              ", verdict " + to_string(rep.verdict)};
}

Outcome families() {
  const auto fams = run_table2();
  bool ok = true;
  std::ostringstream d;
  for (const auto& f : fams) {
    if (!f.patterns_ok) {
      ok = false;
      d << " [" << f.name << ": pattern mismatch]";
    }
    if (!f.matches()) {
      ok = false;
      d << " [" << f.name;
      if (!f.extra.empty()) {
        d << " holds but not listed:";
        for (const auto& p : f.extra) d << " " << to_string(p);
      }
      if (!f.missing.empty()) {
        d << " listed but fails:";
        for (const auto& p : f.missing) d << " " << to_string(p);
      }
      d << "]";
    }
  }
  bool b38 = false, b39 = false;
  for (const auto& f : fams)
    if (f.name == "U^2 + E8(-1) + A1(-d)")
      for (const auto& p : f.holds) {
        b38 = b38 || p[0] == 38;
        b39 = b39 || p[0] == 39;
      }
  ok = ok && b38 && !b39;
  return {ok, std::to_string(fams.size()) + " families; d=38 " + (b38 ? "holds" : "fails") + ", d=39 " +
                  (b39 ? "holds" : "fails") + (d.str().empty() ? "" : ";" + d.str())};
}

Outcome ns_triples() {
  std::size_t total = 0, ok = 0;
  std::ostringstream bad;
  for (const auto& r : nv_catalog()) {
    if (!r.expr) continue;
    ++total;
    const Triple t = nv_row_check(r);
    if (t == r.printed) ++ok;
    else bad << " row " << r.id << " computed " << to_string(t) << " listed " << to_string(r.printed) << ";";
  }
  return {ok == total && total >= 45,
          std::to_string(ok) + "/" + std::to_string(total) + " rows agree" + (bad.str().empty() ? "" : ":" + bad.str())};
}

Outcome local_counts() {
  const std::vector<std::pair<long, int>> pw{{2, 3}, {3, 1}, {5, 1}, {7, 1}};
  std::size_t lattices = 0, compared = 0, bad = 0;
  for (int t = 0; t < 240; ++t) {
    const auto n = static_cast<std::size_t>(testing::uniform(1, 5));
    const EvenLattice l = testing::random_even_lattice(n, 6);
    ++lattices;
    for (const auto& [p, w] : pw) {
      long a = 1;
      for (int i = 0; i < w; ++i) a *= p;
      ++compared;
      if (!(fast_distribution(l, p, w) == brute_distribution(l, a))) ++bad;
    }
  }
  return {bad == 0 && lattices >= 200, std::to_string(lattices) + " lattices, " + std::to_string(compared) +
                                           " distributions, " + std::to_string(bad) + " mismatches"};
}

Outcome bound_chain() {
  std::size_t checked = 0, bad = 0;
  std::ostringstream d;
  for (const auto& f : run_table2())
    for (const auto& inst : f.instances) {
      const EvenLattice l = normalize_b2(build(inst.expr));
      if (l.rank() > 30) continue;
      const auto c = c10_coefficient(l);
      ++checked;
      if (!(inst.thm11.rhs.lower() <= abs(c.value).upper())) {
        ++bad;
        d << " " << inst.expr;
      }
    }
  for (const auto& r : run_nv_table()) {
    if (!r.c10 || r.u_assumed < 1) continue;
    ++checked;
    if (!(r.thm11.rhs.lower() <= abs(*r.c10).upper())) {
      ++bad;
      d << " row " << r.id;
    }
  }
  return {bad == 0 && checked > 0,
          std::to_string(checked) + " lattices, " + std::to_string(bad) + " violations" + d.str()};
}

Outcome milgram() {
  std::vector<EvenLattice> base;
  for (const char* e : {"U", "U(2)", "U(3)", "U(-5)", "S4", "E6", "E7", "E8", "<2>", "<-2>", "<6>", "<-12>", "<30>"})
    base.push_back(build(e));
  for (long n = 1; n <= 12; ++n) base.push_back(build("A" + std::to_string(n)));
  for (long n = 2; n <= 12; ++n) base.push_back(build("D" + std::to_string(n)));
  const std::size_t constructors = base.size();
  for (std::size_t i = 0; i < constructors; ++i) {
    base.push_back(rescale(base[i], Integer(-1)));
    base.push_back(rescale(base[i], Integer(3)));
  }
  const std::size_t singles = base.size();
  // random sums, kept within the size limit of the Gauss sum enumeration
  while (base.size() < singles + 50) {
    EvenLattice l = base[static_cast<std::size_t>(testing::uniform(0, static_cast<long>(singles) - 1))];
    const long parts = testing::uniform(1, 3);
    for (long j = 0; j < parts; ++j)
      l = direct_sum(l, base[static_cast<std::size_t>(testing::uniform(0, static_cast<long>(constructors) - 1))]);
    if (abs(l.det()) <= 1000000) base.push_back(l);
  }
  std::size_t bad = 0;
  for (const auto& l : base) {
    const int expected = ((signature(l).difference() % 8) + 8) % 8;
    if (milgram_signature(discriminant_form(l)) != expected) ++bad;
  }
  return {bad == 0, std::to_string(base.size()) + " lattices, " + std::to_string(bad) + " mismatches"};
}

Outcome surrogate_pairs() {
  std::size_t pairs = 0, agree = 0;
  std::ostringstream d;
  for (const char* e : {"U + S4", "U^2 + A2", "U^2 + A1(5) + A1", "U^2 + A3", "U^2 + <6>", "U^2 + D4",
                        "U + U(2) + A1"}) {
    const EvenLattice l = normalize_b2(build(e));
    const SurrogateSpec s = spec_of(l, l.rank() + 8);
    const auto found = find_surrogates(s, 2);
    if (found.size() < 2) {
      d << " " << e << ": only " << found.size() << " found;";
      continue;
    }
    const Real a = c10_from_genus(found[0]).value.value;
    const Real b = c10_from_genus(found[1]).value.value;
    ++pairs;
    if (rel_close(a, b, Real("1e-9"))) ++agree;
    else d << " " << e << ": " << PrecReal(a).str(12) << " vs " << PrecReal(b).str(12) << ";";
  }
  return {pairs >= 5 && agree == pairs,
          std::to_string(agree) + "/" + std::to_string(pairs) + " pairs agree" + d.str()};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"r(k) table", 0, table1},
      {"worked coefficient -264/17", 5, worked_coefficient},
      {"worked bound (8,4,17/2)", 0, worked_bound},
      {"surrogate for the first catalog row", 600, surrogate_row},
      {"family verdict ranges", 0, families},
      {"catalog (D,N,k) triples", 0, ns_triples},
      {"fast vs brute local counts", 0, local_counts},
      {"simplified bound below |c10|", 0, bound_chain},
      {"Milgram signature", 0, milgram},
      {"genus invariance of c10 across surrogates", 0, surrogate_pairs},
  };
  return all;
}

bool run_one(std::size_t i) {
  const Criterion& c = criteria()[i - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.limit_s > 0 && secs > c.limit_s) {
    o.pass = false;
    o.detail += "; exceeded " + std::to_string(static_cast<int>(c.limit_s)) + " s";
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << " " << std::setw(2) << i << "  " << c.name << "  [" << std::fixed
            << std::setprecision(2) << secs << " s]  " << o.detail << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = criteria().size();
  bool ok = true;
  if (argc > 1) {
    for (int a = 1; a < argc; ++a) {
      const long i = std::strtol(argv[a], nullptr, 10);
      if (i < 1 || i > static_cast<long>(n)) {
        std::cerr << "criterion index out of range: " << argv[a] << "\n";
        return 2;
      }
      ok = run_one(static_cast<std::size_t>(i)) && ok;
    }
  } else {
    for (std::size_t i = 1; i <= n; ++i) ok = run_one(i) && ok;
  }
  return ok ? 0 : 1;
}
