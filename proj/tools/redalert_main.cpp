#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "redalert/report.hpp"

int main(int argc, char** argv) {
  redalert::AnalysisConfig cfg;
  CLI::App app{"Determinacy inference for Prolog programs with cut"};
  app.add_option("files", cfg.inputs, "Prolog source files")->required()->check(CLI::ExistingFile);
  app.add_option("--depth-k", cfg.depth_k, "Term depth kept by the depth-k domain")->check(CLI::PositiveNumber);
  app.add_option("--max-mux-arity", cfg.max_subset, "Largest variable subset tried for mutual exclusion")
      ->check(CLI::PositiveNumber);
  app.add_option("--dk-cap", cfg.dk_cap, "Depth-k set size before widening to top")->check(CLI::PositiveNumber);
  app.add_flag("--relax-cut", cfg.relax_cut, "Drop cuts that break stratification instead of failing");
  app.add_flag("--jacobi", cfg.jacobi, "Defer fixpoint updates to the end of each pass");
  std::string format = "text";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--dump-normal-form", cfg.dump_normal_form, "Print the cut normal form");
  app.add_flag("--dump-success", cfg.dump_success, "Print the success abstractions");
  std::vector<int> oracle;
  auto* oracle_opt = app.add_option("--oracle-check", oracle, "Check each condition with N random calls (default 200)")
                         ->expected(0, 1)
                         ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for the oracle check");
  std::string out_path;
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_flag("--timings", cfg.timings, "Report per-phase wall times");
  CLI11_PARSE(app, argc, argv);

  cfg.format = format == "json" ? redalert::Format::Json : redalert::Format::Text;
  if (oracle_opt->count() > 0) cfg.oracle_trials = oracle.empty() ? 200 : oracle.front();

  if (out_path.empty()) return redalert::run(cfg, std::cout, std::cerr);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  return redalert::run(cfg, out, std::cerr);
}
