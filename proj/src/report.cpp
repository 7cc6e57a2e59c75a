#include "redalert/report.hpp"

#include <chrono>
#include <fstream>
#include <algorithm>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "redalert/errors.hpp"

namespace redalert {

namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::map<VarId, std::string> names_of(const PredReport& p) {
  std::map<VarId, std::string> out;
  for (std::size_t i = 0; i < p.ids.size(); ++i) out[p.ids[i]] = p.arg_names[i];
  return out;
}

/// Argument position first, anything else after in id order.
RankFn rank_of(const PredReport& p) {
  std::map<VarId, long> pos;
  for (std::size_t i = 0; i < p.ids.size(); ++i) pos[p.ids[i]] = static_cast<long>(i);
  long n = static_cast<long>(p.ids.size());
  return [pos, n](VarId v) {
    auto it = pos.find(v);
    return it == pos.end() ? n + static_cast<long>(v) : it->second;
  };
}

std::string fmt_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << ms;
  return os.str();
}

}  // namespace

std::vector<std::string> arg_names(std::size_t arity) {
  static const char* const kShort[] = {"w", "x", "y", "z", "a", "b", "c", "d"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arity; ++i) out.push_back(arity <= 8 ? kShort[i] : "a" + std::to_string(i + 1));
  return out;
}

DetReport analyze_source(const std::string& source, const std::string& label, const AnalysisConfig& cfg) {
  DetReport r;
  r.input = label;
  r.space = make_space();

  auto t0 = Clock::now();
  Program program = parse_program(source);
  r.timings.parse = ms_since(t0);

  t0 = Clock::now();
  NormalizeOptions nopts;
  nopts.relax_cut = cfg.relax_cut;
  NormalProgram np = normalize_program(program, nopts);
  r.timings.normalize = ms_since(t0);
  r.warnings = np.warnings;
  if (cfg.dump_normal_form) r.normal_form = dump_normal_form(np);

  SuccessOptions sopts;
  sopts.depth_k = cfg.depth_k;
  sopts.dk_cap = cfg.dk_cap;
  sopts.iteration_limit = iteration_limit_from_env(cfg.iteration_limit);
  SuccessEnv senv = lfp_success(np, r.space, sopts);
  r.timings.pos_lfp = senv.pos_ms;
  r.timings.dk_lfp = senv.dk_ms;
  if (cfg.dump_success) r.success = dump_success(senv);
  for (const auto& k : senv.widened()) r.warnings.push_back("depth-k set widened to top for " + k.str());

  DetOptions dopts;
  dopts.jacobi = cfg.jacobi;
  dopts.iteration_limit = sopts.iteration_limit;
  dopts.max_subset = cfg.max_subset;
  DetEnv denv = gfp_det(senv, dopts);
  r.timings.mux = denv.mux_ms;
  r.timings.gfp = denv.gfp_ms;
  for (const auto& k : denv.descent_violations) r.warnings.push_back("greatest fixpoint ascended at " + k);

  for (const auto& k : np.order) {
    const NormalPredicate& n = np.at(k);
    PredReport p;
    p.key = k;
    p.aux = n.aux;
    p.stratum = np.stratum_of.at(k);
    p.arg_names = arg_names(k.arity);
    p.ids = senv.param_ids(k);
    p.cond = denv.cond.at(k);
    p.f1 = denv.f1.at(k);
    p.f2 = denv.f2.at(k);
    r.preds.push_back(std::move(p));
    if (n.aux) ++r.aux_predicates;
  }
  std::stable_partition(r.preds.begin(), r.preds.end(), [](const PredReport& p) { return !p.aux; });

  if (cfg.oracle_trials > 0) {
    t0 = Clock::now();
    Program normal = to_program(np);
    std::set<PredKey> in_source;
    for (const auto& c : program.clauses()) in_source.insert(c.key());
    OracleTotals totals;
    std::uint64_t index = 0;
    for (auto& p : r.preds) {
      const Program& prog = in_source.count(p.key) ? program : normal;
      std::uint64_t seed = cfg.seed + 1000003ull * index++;
      p.verdict = check_determinacy(prog, p.key, p.cond, p.ids, cfg.oracle_trials, seed, cfg.budget,
                                    cfg.depth_k + 1);
      totals.trials += p.verdict->trials;
      totals.passes += p.verdict->passes;
      totals.inconclusive += p.verdict->inconclusive;
      totals.failures += p.verdict->failures;
    }
    r.oracle = totals;
    r.timings.oracle = ms_since(t0);
  }
  return r;
}

std::string render_condition(const PredReport& p, const PosFormula& f, const SpacePtr& space) {
  auto names = names_of(p);
  return to_dnf_string(
      f,
      [&](VarId v) {
        auto it = names.find(v);
        return it == names.end() ? space_names(space)(v) : it->second;
      },
      rank_of(p));
}

std::vector<std::vector<std::string>> dnf_products(const PredReport& p, const PosFormula& f, const SpacePtr& space) {
  auto names = names_of(p);
  std::vector<std::vector<std::string>> out;
  for (const auto& cube : prime_implicants(f, rank_of(p))) {
    std::vector<std::string> product;
    for (Lit l : cube) {
      auto it = names.find(lit_var(l));
      std::string n = it == names.end() ? space_names(space)(lit_var(l)) : it->second;
      product.push_back(lit_neg(l) ? "~" + n : n);
    }
    out.push_back(std::move(product));
  }
  return out;
}

std::string emit_text(const DetReport& r, const AnalysisConfig& cfg) {
  std::ostringstream os;
  if (!r.normal_form.empty()) os << r.normal_form << (r.normal_form.ends_with('\n') ? "" : "\n");
  if (!r.success.empty()) os << r.success << (r.success.ends_with('\n') ? "" : "\n");
  for (const auto& p : r.preds) {
    if (p.aux) continue;
    os << p.key.str() << " : " << render_condition(p, p.cond, r.space) << "\n";
  }
  for (const auto& w : r.warnings) os << "% warning: " << w << "\n";
  if (r.oracle) {
    os << "% oracle: trials=" << r.oracle->trials << " passes=" << r.oracle->passes
       << " inconclusive=" << r.oracle->inconclusive << " failures=" << r.oracle->failures << "\n";
    for (const auto& p : r.preds)
      if (p.verdict && !p.verdict->pass())
        os << "% counterexample " << p.key.str() << ": " << p.verdict->witness << "\n";
  }
  if (cfg.timings) {
    const auto& t = r.timings;
    os << "% timings (ms): parse=" << fmt_ms(t.parse) << " normalize=" << fmt_ms(t.normalize)
       << " pos_lfp=" << fmt_ms(t.pos_lfp) << " dk_lfp=" << fmt_ms(t.dk_lfp) << " mux=" << fmt_ms(t.mux)
       << " gfp=" << fmt_ms(t.gfp) << " oracle=" << fmt_ms(t.oracle) << "\n";
  }
  return os.str();
}

namespace {

Json report_json(const DetReport& r, const AnalysisConfig& cfg) {
  Json j;
  j["input"] = r.input;
  Json preds = Json::array();
  for (const auto& p : r.preds) {
    if (p.aux) continue;
    Json e;
    e["name"] = p.key.name;
    e["arity"] = p.key.arity;
    e["args"] = p.arg_names;
    e["condition"] = render_condition(p, p.cond, r.space);
    e["condition_dnf"] = dnf_products(p, p.cond, r.space);
    e["bottom"] = p.cond.is_bottom();
    e["stratum"] = p.stratum;
    e["mux_f1"] = dnf_products(p, p.f1, r.space);
    e["mux_f2"] = dnf_products(p, p.f2, r.space);
    if (p.verdict) {
      e["oracle"] = {{"trials", p.verdict->trials},
                     {"passes", p.verdict->passes},
                     {"inconclusive", p.verdict->inconclusive},
                     {"failures", p.verdict->failures},
                     {"witness", p.verdict->witness}};
    }
    preds.push_back(std::move(e));
  }
  j["predicates"] = std::move(preds);
  j["aux_predicates"] = r.aux_predicates;
  if (cfg.timings) {
    const auto& t = r.timings;
    j["timings"] = {{"parse_ms", t.parse}, {"normalize_ms", t.normalize}, {"pos_lfp_ms", t.pos_lfp},
                    {"dk_lfp_ms", t.dk_lfp}, {"mux_ms", t.mux},           {"gfp_ms", t.gfp},
                    {"oracle_ms", t.oracle}};
  }
  j["warnings"] = r.warnings;
  if (r.oracle) {
    j["oracle"] = {{"trials", r.oracle->trials},
                   {"passes", r.oracle->passes},
                   {"inconclusive", r.oracle->inconclusive},
                   {"failures", r.oracle->failures}};
  }
  if (!r.normal_form.empty()) j["normal_form"] = r.normal_form;
  if (!r.success.empty()) j["success"] = r.success;
  return j;
}

}  // namespace

std::string emit_json(const DetReport& r, const AnalysisConfig& cfg) { return report_json(r, cfg).dump(2) + "\n"; }

std::string emit_json(const std::vector<DetReport>& rs, const AnalysisConfig& cfg) {
  if (rs.size() == 1) return emit_json(rs.front(), cfg);
  Json arr = Json::array();
  for (const auto& r : rs) arr.push_back(report_json(r, cfg));
  return arr.dump(2) + "\n";
}

namespace {

struct FileResult {
  std::optional<DetReport> report;
  std::string error;
};

FileResult analyze_file(const std::string& path, const AnalysisConfig& cfg) {
  FileResult out;
  std::ifstream in(path);
  if (!in) {
    out.error = path + ": cannot read file";
    return out;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    out.report = analyze_source(ss.str(), path, cfg);
  } catch (const ParseError& e) {
    out.error = path + ":" + e.what();
  } catch (const Error& e) {
    out.error = path + ": " + e.what();
  }
  return out;
}

}  // namespace

int run(const AnalysisConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::future<FileResult>> jobs;
  for (const auto& path : cfg.inputs) jobs.push_back(std::async(std::launch::async, analyze_file, path, cfg));
  std::vector<FileResult> results;
  for (auto& j : jobs) results.push_back(j.get());

  int code = 0;
  std::vector<DetReport> reports;
  for (auto& r : results) {
    if (!r.report) {
      err << "error: " << r.error << "\n";
      code = std::max(code, 1);
      continue;
    }
    if (r.report->oracle && r.report->oracle->failures > 0) code = 2;
    reports.push_back(std::move(*r.report));
  }

  std::string text;
  if (cfg.format == Format::Json) {
    if (!reports.empty()) text = emit_json(reports, cfg);
  } else {
    for (const auto& r : reports) {
      if (cfg.inputs.size() > 1) text += "% " + r.input + "\n";
      text += emit_text(r, cfg);
    }
  }
  out << text;
  return code;
}

}  // namespace redalert
