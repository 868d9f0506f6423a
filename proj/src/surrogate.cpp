#include "omv/surrogate.hpp"

#include <array>
#include <cstdlib>
#include <sstream>

namespace omv {

namespace {

int mod8(long x) { return static_cast<int>(((x % 8) + 8) % 8); }

int sign_of(const Integer& x) { return sgn(x) < 0 ? -1 : 1; }

// Bareiss on machine integers; small cores only
long long small_det(const std::vector<long long>& m, std::size_t n) {
  if (n == 0) return 1;
  std::array<long long, 64> a{};
  std::copy(m.begin(), m.end(), a.begin());
  long long prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r * n + k] == 0) ++r;
      if (r == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[r * n + c]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

// 0, s, -s, 2s, -2s, ... up to the bound
std::vector<long> value_order(long bound, long step) {
  std::vector<long> v{0};
  for (long x = step; x <= bound; x += step) {
    v.push_back(x);
    v.push_back(-x);
  }
  return v;
}

EvenLattice unimodular(const IntMatrix& g, std::size_t u) { return EvenLattice(g, u); }

void check_result(const EvenLattice& lat, const SurrogateSpec& spec) {
  const auto sig = signature(lat);
  if (lat.rank() != spec.rank) throw SurrogateError("surrogate has the wrong rank");
  if (lat.det() != spec.det) throw SurrogateError("surrogate has the wrong determinant");
  if (mod8(sig.difference()) != mod8(spec.sig8)) throw SurrogateError("surrogate has the wrong signature mod 8");
  if (!iso_check(discriminant_form(lat), spec.form)) throw SurrogateError("surrogate has the wrong discriminant form");
}

std::string describe(const SurrogateSpec& spec, const SearchStats& st) {
  std::ostringstream os;
  os << "core rank <= " << spec.core_rank_max << ", entries in [-" << spec.entry_bound << ", "
     << spec.entry_bound << "]: " << st.candidates << " cores, " << st.det_matches << " with |det| = "
     << Integer(abs(spec.det)).get_str() << ", " << st.form_checks << " form comparisons";
  return os.str();
}

}  // namespace

void validate(const SurrogateSpec& spec) {
  if (spec.det == 0) throw SurrogateError("target determinant must be nonzero");
  if (abs(spec.det) != spec.form.order())
    throw SurrogateError("|det| = " + Integer(abs(spec.det)).get_str() + " but the form has order " +
                         spec.form.order().get_str());
  if (spec.rank < spec.form.length())
    throw SurrogateError("rank " + std::to_string(spec.rank) + " is below the length of the form");
  const int s = milgram_signature(spec.form);
  if (s != mod8(spec.sig8))
    throw SurrogateError("signature " + std::to_string(mod8(spec.sig8)) +
                         " mod 8 contradicts the form (Milgram gives " + std::to_string(s) + ")");
  // (-1)^n_minus = sign det and n_plus - n_minus = sig8 (mod 8) fix n_minus mod 2
  const long nm2 = static_cast<long>(spec.rank) - mod8(spec.sig8);
  if (nm2 % 2 != 0) throw SurrogateError("rank and signature mod 8 have different parity");
  if (((nm2 / 2) % 2 == 0 ? 1 : -1) != sign_of(spec.det))
    throw SurrogateError("determinant sign contradicts rank and signature mod 8");
  if (spec.core_rank_max > 6) throw SurrogateError("core_rank_max above 6 is not supported");
  if (spec.entry_bound < 0 || spec.entry_bound > 64) throw SurrogateError("entry_bound must lie in 0..64");
}

std::optional<EvenLattice> pad(const std::optional<EvenLattice>& core, std::size_t rank, int det_sign, int sig8) {
  const std::size_t r = core ? core->rank() : 0;
  if (rank < r || (rank - r) % 2 != 0) return std::nullopt;
  const long deficit = static_cast<long>(rank - r);
  SignatureInfo cs;
  int csign = 1;
  if (core) {
    cs = signature(*core);
    csign = sign_of(core->det());
  }

  struct Choice {
    long a, c, e;
  };
  std::optional<Choice> best;
  auto key = [&](const Choice& ch) {
    const long nm = static_cast<long>(cs.n_minus) + ch.a + 8 * ch.e;
    return std::pair(std::labs(nm - 2), ch.a + ch.c + ch.e);
  };
  for (long m = 0; 8 * m <= deficit; ++m) {
    const long a = (deficit - 8 * m) / 2;
    for (long e = 0; e <= m; ++e) {
      const Choice ch{a, m - e, e};
      const long diff = cs.difference() + 8 * ch.c - 8 * ch.e;
      const int sign = csign * (a % 2 == 0 ? 1 : -1);
      if (mod8(diff) != mod8(sig8) || sign != det_sign) continue;
      if (!best || key(ch) < key(*best)) best = ch;
    }
  }
  if (!best) return std::nullopt;

  std::vector<EvenLattice> parts;
  if (core) parts.push_back(*core);
  for (long i = 0; i < best->a; ++i) parts.push_back(unimodular(hyperbolic_gram(), 1));
  for (long i = 0; i < best->c; ++i) parts.push_back(unimodular(root_e_gram(8), 0));
  for (long i = 0; i < best->e; ++i) parts.push_back(unimodular(root_e_gram(8).scaled(-1), 0));
  if (parts.empty()) return std::nullopt;
  EvenLattice out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = direct_sum(out, parts[i]);
  return out;
}

std::vector<EvenLattice> find_surrogates(const SurrogateSpec& spec, std::size_t count, SearchStats* stats) {
  validate(spec);
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  std::vector<EvenLattice> found;
  const int det_sign = sign_of(spec.det);
  const auto start = std::chrono::steady_clock::now();

  for (const auto& seed : spec.seeds) {
    if (seed.rank() > spec.rank || !iso_check(discriminant_form(seed), spec.form)) continue;
    if (auto l = pad(seed, spec.rank, det_sign, spec.sig8)) {
      check_result(*l, spec);
      found.push_back(*l);
      if (found.size() >= count) return found;
    }
  }

  if (spec.form.is_trivial()) {
    if (auto l = pad(std::nullopt, spec.rank, det_sign, spec.sig8)) {
      check_result(*l, spec);
      found.push_back(*l);
      if (found.size() >= count) return found;
    }
  }

  const Integer target_abs = abs(spec.det);
  // returns true once enough surrogates are collected
  auto visit = [&](const std::vector<long long>& m, std::size_t n) {
    ++st.candidates;
    if ((st.candidates & 0x3fff) == 0 && std::chrono::steady_clock::now() - start > spec.time_budget)
      throw SurrogateError("time budget of " + std::to_string(spec.time_budget.count()) + " ms exhausted; " +
                           describe(spec, st));
    const long long d = small_det(m, n);
    if (d == 0 || Integer(static_cast<long>(std::llabs(d))) != target_abs) return false;
    ++st.det_matches;
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = static_cast<long>(m[i * n + j]);
    const EvenLattice core(g);
    if (mod8(signature(core).difference()) != mod8(spec.sig8)) return false;
    const DiscriminantForm f = discriminant_form(core);
    if (f.invariant_factors() != spec.form.invariant_factors()) return false;
    ++st.form_checks;
    if (!iso_check(f, spec.form)) return false;
    auto l = pad(core, spec.rank, det_sign, spec.sig8);
    if (!l) return false;
    check_result(*l, spec);
    found.push_back(*l);
    return found.size() >= count;
  };

  // shells of growing max |entry|; inside a shell, ranks in increasing order and
  // matrices in lexicographic order on 0, 1, -1, 2, -2, ...
  for (long h = 1; h <= spec.entry_bound; ++h) {
    const auto diag_vals = value_order(h, 2);
    const auto off_vals = value_order(h, 1);
    for (std::size_t n = 1; n <= std::min(spec.core_rank_max, spec.rank); ++n) {
      if ((spec.rank - n) % 2 != 0 || (n == 1 && h % 2 == 1)) continue;
      // upper triangle, row-major; the last position varies fastest
      std::vector<std::pair<std::size_t, std::size_t>> pos;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) pos.emplace_back(i, j);
      std::vector<std::size_t> idx(pos.size(), 0);
      std::vector<long long> m(n * n, 0);

      for (bool more = true; more;) {
        long top = 0;
        for (std::size_t t = 0; t < pos.size(); ++t) {
          const auto [i, j] = pos[t];
          const long v = i == j ? diag_vals[idx[t]] : off_vals[idx[t]];
          m[i * n + j] = m[j * n + i] = v;
          top = std::max(top, std::labs(v));
        }
        if (top == h && visit(m, n)) return found;

        more = false;
        for (std::size_t t = pos.size(); t-- > 0;) {
          const std::size_t lim = pos[t].first == pos[t].second ? diag_vals.size() : off_vals.size();
          if (++idx[t] < lim) {
            more = true;
            break;
          }
          idx[t] = 0;
        }
      }
    }
  }
  if (found.empty()) throw SurrogateError("no surrogate found; " + describe(spec, st));
  return found;
}

EvenLattice find_surrogate(const SurrogateSpec& spec, SearchStats* stats) {
  return find_surrogates(spec, 1, stats).front();
}

void to_json(nlohmann::json& j, const SurrogateSpec& spec) {
  j = nlohmann::json{{"rank", spec.rank},
                     {"det", spec.det.get_str()},
                     {"sig8", mod8(spec.sig8)},
                     {"form", spec.form},
                     {"core_rank_max", spec.core_rank_max},
                     {"entry_bound", spec.entry_bound},
                     {"time_budget_ms", spec.time_budget.count()}};
}

void from_json(const nlohmann::json& j, SurrogateSpec& spec) {
  spec.rank = j.at("rank").get<std::size_t>();
  spec.det = Integer(j.at("det").get<std::string>());
  spec.sig8 = j.at("sig8").get<int>();
  spec.form = j.at("form").get<DiscriminantForm>();
  spec.core_rank_max = j.value("core_rank_max", std::size_t{4});
  spec.entry_bound = j.value("entry_bound", 8L);
  spec.time_budget = std::chrono::milliseconds(j.value("time_budget_ms", 600000L));
}

}  // namespace omv
