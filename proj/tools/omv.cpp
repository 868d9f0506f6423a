#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "omv/catalog.hpp"
#include "omv/disc_form.hpp"
#include "omv/surrogate.hpp"

using namespace omv;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kInvalid = 3, kPrecision = 4, kNoSurrogate = 5 };

int default_digits() {
  if (const char* env = std::getenv("OMV_PREC")) {
    try {
      return check_digits(std::stoi(env));
    } catch (const std::logic_error&) {
      throw PrecisionError(std::string("OMV_PREC is not a number: ") + env);
    }
  }
  return kDefaultDigits;
}

CharacterConvention parse_convention(const std::string& s) {
  for (auto c : {CharacterConvention::AsPrinted, CharacterConvention::FlipOddDisc, CharacterConvention::FlipEvenDisc})
    if (to_string(c) == s) return c;
  throw CLI::ValidationError("--convention", "unknown convention " + s);
}

void print_report(const std::string& input, const CriterionReport& r) {
  std::cout << "input       " << input << "\n"
            << "invariants  rank " << r.rank << ", b " << r.b << ", det " << r.det << ", D " << r.d << ", N " << r.n
            << ", k " << to_string(r.k) << ", u_count " << r.u_count << "\n"
            << "bound       4b = " << r.four_b << " < r(k)/sqrt(D) C(N,k) = " << r.thm11.rhs.str(15) << "  "
            << to_string(r.thm11.holds) << "\n";
  if (r.c10)
    std::cout << "c10         4b = " << r.four_b << " < |c10| = " << abs(r.c10->value).str(15) << " (error "
              << r.c10->value.error.str(2) << ")  " << to_string(r.prop32) << "\n";
  std::cout << "verdict     " << to_string(r.verdict) << "\n";
}

int cmd_analyze(const std::string& expr, bool json, int digits, std::optional<std::size_t> assert_u,
                CharacterConvention conv) {
  const auto rep = analyze(expr, {digits, assert_u, conv});
  if (json)
    std::cout << nlohmann::json(make_record(expr, rep)).dump(2) << "\n";
  else
    print_report(expr, rep);
  return kOk;
}

int cmd_coeff(const std::string& expr, bool json, int digits, CharacterConvention conv) {
  const EvenLattice lat = normalize_b2(build(parse_lattice(expr)));
  const auto c = c10_coefficient(lat, digits, conv);
  if (json) {
    nlohmann::json j = {{"input", expr},
                        {"k", to_string(c.k)},
                        {"character", c.char_disc.get_str()},
                        {"convention", to_string(conv)},
                        {"archimedean", c.archimedean_part.str(digits)},
                        {"l_ratio", c.l_ratio.str(digits)},
                        {"local_product", c.local_product.get_str()},
                        {"c10", c.value.str(digits)},
                        {"error", c.value.error.str(3)}};
    auto lf = nlohmann::json::array();
    for (const auto& f : c.local_factors)
      lf.push_back({{"p", f.p}, {"w", f.w}, {"count", f.n10.get_str()}, {"normalized", f.normalized.get_str()}});
    j["local_factors"] = lf;
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "k = " << to_string(c.k) << ", character of discriminant " << c.char_disc << " ("
            << to_string(conv) << ")\n"
            << "archimedean part   " << c.archimedean_part.str(digits) << "\n"
            << "L-value ratio      " << c.l_ratio.str(digits) << "\n";
  for (const auto& f : c.local_factors)
    std::cout << "p = " << std::setw(4) << f.p << "  N mod p^" << f.w << " = " << f.n10 << "  factor " << f.normalized
              << "\n";
  std::cout << "c10 = " << c.value.str(digits) << "  (error " << c.value.error.str(2) << ")\n";
  return kOk;
}

int cmd_table(const std::string& which, bool csv, bool json, int digits) {
  if (which == "1") {
    const auto t = run_table1(digits);
    if (csv) std::cout << table1_csv(t);
    else if (json) std::cout << table1_json(t).dump(2) << "\n";
    else
      for (const auto& e : t)
        std::cout << "b = " << std::setw(2) << e.b << "  k = " << std::setw(5) << to_string(e.k) << "  r(k) = "
                  << std::setw(8) << e.truncated << "  printed " << e.printed << (e.match ? "" : "  MISMATCH") << "\n";
    return kOk;
  }
  if (which == "2") {
    const auto t = run_table2(digits);
    if (csv) std::cout << table2_csv(t);
    else if (json) std::cout << table2_json(t).dump(2) << "\n";
    else
      for (const auto& f : t) {
        std::cout << f.name << "  patterns " << (f.patterns_ok ? "ok" : "FAIL") << "  holds:";
        for (const auto& p : f.holds) std::cout << " " << to_string(p);
        if (!f.extra.empty()) {
          std::cout << "\n    not printed:";
          for (const auto& p : f.extra) std::cout << " " << to_string(p);
        }
        if (!f.missing.empty()) {
          std::cout << "\n    printed but failing:";
          for (const auto& p : f.missing) std::cout << " " << to_string(p);
        }
        std::cout << "\n";
      }
    return kOk;
  }
  if (which == "nv") {
    const auto t = run_nv_table(digits);
    if (csv) std::cout << nv_csv(t);
    else if (json) std::cout << nv_json(t).dump(2) << "\n";
    else
      for (const auto& r : t) {
        std::cout << std::setw(2) << r.id << "  " << std::setw(16) << to_string(r.verdict) << "  bound "
                  << std::setw(8) << to_string(r.thm11.holds);
        if (r.c10) std::cout << "  c10 " << r.c10->str(10);
        if (r.agrees) std::cout << (*r.agrees ? "" : "  DISAGREES WITH PRINTED");
        for (const auto& f : r.flags) std::cout << "  [" << f << "]";
        std::cout << "\n";
      }
    return kOk;
  }
  throw CLI::ValidationError("table", "expected 1, 2 or nv");
}

int cmd_surrogate(SurrogateSpec spec, const std::string& form_from, bool flip_form, bool json, int digits) {
  spec.form = discriminant_form(build(parse_lattice(form_from)));
  if (flip_form) spec.form = flip(spec.form);
  SearchStats st;
  const EvenLattice l = find_surrogate(spec, &st);
  const auto c = c10_from_genus(l, digits);
  if (json) {
    auto gram = nlohmann::json::array();
    for (std::size_t i = 0; i < l.rank(); ++i) {
      auto row = nlohmann::json::array();
      for (std::size_t j = 0; j < l.rank(); ++j) row.push_back(l.gram()(i, j).get_si());
      gram.push_back(row);
    }
    std::cout << nlohmann::json{{"spec", spec}, {"gram", gram}, {"cores_visited", st.candidates},
                                {"c10", c.value.str(digits)}, {"error", c.value.error.str(3)}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  const auto sig = signature(l);
  std::cout << "surrogate of rank " << l.rank() << ", det " << l.det() << ", signature (" << sig.n_plus << ","
            << sig.n_minus << ") after " << st.candidates << " cores\n"
            << to_string(l.gram()) << "\n"
            << "c10 = " << c.value.str(digits) << "  (b = " << l.rank() - 2 << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniruledness criteria for orthogonal modular varieties"};
  app.require_subcommand(1);

  int prec = 0;
  bool json = false, csv = false;
  std::string expr, which, form_from, conv_name = to_string(kDefaultConvention);
  std::optional<std::size_t> assert_u;
  bool flip_form = false;
  SurrogateSpec spec;
  long sig8 = 0;
  std::string det_text;
  long budget_ms = 600000;

  auto* an = app.add_subcommand("analyze", "evaluate both criteria for a lattice expression");
  an->add_option("expr", expr, "lattice, e.g. \"U^2 + A1(-13)\"")->required();
  an->add_flag("--json", json, "machine-readable output");
  an->add_option("--prec", prec, "decimal digits");
  an->add_option("--assert-u", assert_u, "number of U summands to assume");
  an->add_option("--convention", conv_name, "character sign convention");

  auto* co = app.add_subcommand("coeff", "the (1,0) Eisenstein coefficient and its factors");
  co->add_option("expr", expr)->required();
  co->add_flag("--json", json);
  co->add_option("--prec", prec);
  co->add_option("--convention", conv_name);

  auto* ta = app.add_subcommand("table", "reproduce a built-in table");
  ta->add_option("which", which, "1, 2 or nv")->required()->check(CLI::IsMember({"1", "2", "nv"}));
  auto* csv_flag = ta->add_flag("--csv", csv);
  ta->add_flag("--json", json)->excludes(csv_flag);
  ta->add_option("--prec", prec);

  auto* su = app.add_subcommand("surrogate", "find a lattice with prescribed rank, det, signature mod 8 and form");
  su->add_option("--rank", spec.rank)->required();
  su->add_option("--det", det_text)->required();
  su->add_option("--sig8", sig8)->required();
  su->add_option("--form-from", form_from, "lattice whose discriminant form is the target")->required();
  su->add_flag("--flip", flip_form, "negate the target form");
  su->add_option("--bound", spec.entry_bound, "entry bound for core matrices");
  su->add_option("--core-rank", spec.core_rank_max, "largest core rank");
  su->add_option("--time-budget", budget_ms, "milliseconds");
  su->add_flag("--json", json);
  su->add_option("--prec", prec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    const int digits = prec > 0 ? check_digits(prec) : default_digits();
    const CharacterConvention conv = parse_convention(conv_name);
    if (*an) return cmd_analyze(expr, json, digits, assert_u, conv);
    if (*co) return cmd_coeff(expr, json, digits, conv);
    if (*ta) return cmd_table(which, csv, json, digits);
    if (*su) {
      spec.det = Integer(det_text);
      spec.sig8 = static_cast<int>(sig8);
      spec.time_budget = std::chrono::milliseconds(budget_ms);
      return cmd_surrogate(spec, form_from, flip_form, json, digits);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PrecisionError& e) {
    std::cerr << "precision: " << e.what() << "\n";
    return kPrecision;
  } catch (const LatticeError& e) {
    std::cerr << "invalid lattice: " << e.what() << "\n";
    return kInvalid;
  } catch (const SurrogateError& e) {
    std::cerr << "surrogate: " << e.what() << "\n";
    return kNoSurrogate;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad number: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
