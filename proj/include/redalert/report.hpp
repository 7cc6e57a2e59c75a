#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "redalert/detinfer.hpp"
#include "redalert/oracle.hpp"

namespace redalert {

enum class Format { Text, Json };

struct AnalysisConfig {
  std::vector<std::string> inputs;
  int depth_k = 3;
  std::size_t max_subset = 4;
  std::size_t dk_cap = 64;
  int iteration_limit = 1000;
  bool relax_cut = false;
  bool jacobi = false;
  int oracle_trials = 0;  // 0 disables the oracle check
  std::uint64_t seed = 1;
  Budget budget;
  Format format = Format::Text;
  bool dump_normal_form = false;
  bool dump_success = false;
  bool timings = false;
};

/// Wall times in milliseconds.
struct TimingProfile {
  double parse = 0;
  double normalize = 0;
  double pos_lfp = 0;
  double dk_lfp = 0;
  double mux = 0;
  double gfp = 0;
  double oracle = 0;
};

struct PredReport {
  PredKey key;
  bool aux = false;
  int stratum = 0;
  std::vector<std::string> arg_names;
  std::vector<VarId> ids;  // one per argument
  PosFormula cond, f1, f2;
  std::optional<Verdict> verdict;
};

struct OracleTotals {
  int trials = 0;
  int passes = 0;
  int inconclusive = 0;
  int failures = 0;
};

struct DetReport {
  std::string input;
  SpacePtr space;
  std::vector<PredReport> preds;  // source order, auxiliaries last
  int aux_predicates = 0;
  TimingProfile timings;
  std::vector<std::string> warnings;
  std::optional<OracleTotals> oracle;
  std::string normal_form;  // filled when requested
  std::string success;
};

/// w, x, y, z, a, b, c, d for arity up to 8, a1..an beyond.
std::vector<std::string> arg_names(std::size_t arity);

/// The whole pipeline on one program text. Throws redalert::Error on failure.
DetReport analyze_source(const std::string& source, const std::string& label, const AnalysisConfig& cfg);

/// Formula over a predicate's argument names.
std::string render_condition(const PredReport& p, const PosFormula& f, const SpacePtr& space);
/// Prime-implicant DNF; bottom gives no products, top one empty product.
std::vector<std::vector<std::string>> dnf_products(const PredReport& p, const PosFormula& f, const SpacePtr& space);

std::string emit_text(const DetReport& r, const AnalysisConfig& cfg);
std::string emit_json(const DetReport& r, const AnalysisConfig& cfg);
/// Several reports as a JSON array; a single report stays a bare object.
std::string emit_json(const std::vector<DetReport>& rs, const AnalysisConfig& cfg);

/// Analyses every input (in parallel), writes the report to `out` and
/// diagnostics to `err`. Returns 0, 1 on an analysis error, 2 on an oracle
/// counterexample.
int run(const AnalysisConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace redalert
