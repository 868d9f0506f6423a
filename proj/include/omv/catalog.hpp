#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "omv/eisenstein.hpp"

namespace omv {

/// (D, N, k): order of the discriminant group, level, weight.
struct Triple {
  Integer d;
  Integer n;
  HalfInt k;
  bool operator==(const Triple&) const = default;
};

std::string to_string(const Triple& t);

// ---------------------------------------------------------------------------
// r(k) table

struct Table1Entry {
  long b = 0;
  HalfInt k;
  PrecReal r;
  std::string truncated;
  std::string printed;
  bool match = false;
};

std::vector<Table1Entry> run_table1(int digits = kDefaultDigits);

// ---------------------------------------------------------------------------
// families U^2 + X with a closed (D, N, k) pattern

using Params = std::vector<long>;

struct FamilyInstance {
  Params params;
  std::string expr;
  Triple pattern;   // from the symbolic formula
  Triple computed;  // from the Gram matrix
  bool pattern_ok = false;
  Thm11Result thm11;
  bool printed = false;  // listed as uniruled
};

struct FamilyResult {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<FamilyInstance> instances;
  std::vector<Params> holds;    // where the bound holds with two-U constants
  std::vector<Params> printed;
  std::vector<Params> extra;    // holds but not printed
  std::vector<Params> missing;  // printed but does not hold
  bool patterns_ok = true;
  bool matches() const { return extra.empty() && missing.empty(); }
};

std::vector<FamilyResult> run_table2(int digits = kDefaultDigits);

std::string to_string(const Params& p);

// ---------------------------------------------------------------------------
// Neron-Severi lattices of K3 surfaces with finite automorphism group

struct CatalogRow {
  int id = 0;
  std::string ns_name;
  std::optional<std::string> expr;  // absent when no Gram matrix is available
  Triple printed;
  std::string printed_verdict;      // "bound", "coefficient", "?" or "bound, external"
  int printed_dim = 0;
  std::string printed_aut;
};

const std::vector<CatalogRow>& nv_catalog();

/// (D, N, k) of the orthogonal complement in the K3 lattice, read off the NS lattice:
/// D = |det NS|, N = level(NS), k = (22 - rank NS) / 2.
Triple nv_row_check(const CatalogRow& row);

struct NvResult {
  int id = 0;
  std::optional<Triple> computed;
  bool triple_ok = false;
  std::string route;  // "ns-padding", "surrogate-search" or "printed-triple"
  Thm11Result thm11;
  std::size_t u_assumed = 1;
  std::optional<PrecReal> c10;
  Truth prop32 = Truth::NotApplicable;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<bool> agrees;  // with the printed verdict column
  std::vector<std::string> flags;
};

std::vector<NvResult> run_nv_table(int digits = kDefaultDigits);

// ---------------------------------------------------------------------------
// single lattice analysis

struct AnalyzeOptions {
  int digits = kDefaultDigits;
  std::optional<std::size_t> assert_u;
  CharacterConvention conv = kDefaultConvention;
};

/// Parse, normalize to (b,2) and run both criteria. ParseError, LatticeError and
/// PrecisionError propagate.
CriterionReport analyze(const std::string& expr, const AnalyzeOptions& opts = {});

/// Flat, versioned form of a CriterionReport used for JSON output.
struct ReportRecord {
  static constexpr int kSchemaVersion = 1;
  int schema_version = kSchemaVersion;
  std::string input;
  std::size_t rank = 0;
  long b = 0;
  std::string det, d, n, k;
  std::size_t u_count = 0;
  std::string thm11_rhs, thm11_margin, thm11_holds;
  std::string c10, c10_error, prop32_margin, prop32_holds;
  std::string verdict;
  bool operator==(const ReportRecord&) const = default;
};

ReportRecord make_record(const std::string& input, const CriterionReport& rep, int out_digits = 20);

void to_json(nlohmann::json& j, const ReportRecord& r);
void from_json(const nlohmann::json& j, ReportRecord& r);

// ---------------------------------------------------------------------------
// machine-readable table output

std::string table1_csv(const std::vector<Table1Entry>& rows);
std::string table2_csv(const std::vector<FamilyResult>& fams);
std::string nv_csv(const std::vector<NvResult>& rows);

nlohmann::json table1_json(const std::vector<Table1Entry>& rows);
nlohmann::json table2_json(const std::vector<FamilyResult>& fams);
nlohmann::json nv_json(const std::vector<NvResult>& rows);

}  // namespace omv
