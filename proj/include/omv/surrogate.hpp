#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "omv/disc_form.hpp"
#include "omv/lattice.hpp"

namespace omv {

class SurrogateError : public Error {
 public:
  using Error::Error;
};

/// What a surrogate has to match: rank, signed det, signature mod 8 and discriminant form.
struct SurrogateSpec {
  std::size_t rank = 0;
  Integer det;
  int sig8 = 0;
  DiscriminantForm form;
  std::size_t core_rank_max = 4;
  long entry_bound = 8;
  std::chrono::milliseconds time_budget{600000};
  /// Cores tried, in order, before the enumeration (each still has to match the form).
  std::vector<EvenLattice> seeds;
};

/// Throws SurrogateError if |det| differs from the order of the form or sig8 is not the
/// Milgram signature of the form (no lattice can exist then).
void validate(const SurrogateSpec& spec);

/// Core plus copies of U, E8 and E8(-1) reaching the target rank with matching det sign
/// and signature mod 8. Among the fits, n_minus closest to 2 wins, then fewest summands.
std::optional<EvenLattice> pad(const std::optional<EvenLattice>& core, std::size_t rank, int det_sign, int sig8);

struct SearchStats {
  std::uint64_t candidates = 0;   // symmetric even cores visited
  std::uint64_t det_matches = 0;  // cores with the target |det|
  std::uint64_t form_checks = 0;  // iso_check calls
};

/// First surrogate in the deterministic core order. Throws SurrogateError when the space
/// or the time budget is exhausted.
EvenLattice find_surrogate(const SurrogateSpec& spec, SearchStats* stats = nullptr);

/// Up to `count` surrogates from distinct cores, in search order.
std::vector<EvenLattice> find_surrogates(const SurrogateSpec& spec, std::size_t count,
                                         SearchStats* stats = nullptr);

void to_json(nlohmann::json& j, const SurrogateSpec& spec);
void from_json(const nlohmann::json& j, SurrogateSpec& spec);

}  // namespace omv
