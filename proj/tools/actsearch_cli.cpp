#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "actsearch/harness.hpp"

using namespace actsearch;

namespace {

void add_common(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--data", cfg.data, "dataset CSV path or disks:N")->required();
  cmd->add_option("--budget", cfg.budget, "queries per episode");
  cmd->add_option("--k", cfg.k, "neighbor count");
  cmd->add_option("--gamma", cfg.gamma, "posterior pseudocount in [0,1]");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--repeats", cfg.repeats, "episode repeats");
  cmd->add_flag("!--no-seed-target", cfg.seed_target, "start without a revealed target");
  cmd->add_flag("!--no-parallel", cfg.parallel, "disable OpenMP parallelism");
  cmd->add_option("--out", cfg.out, "output directory")->required();
}

int exit_code(const ExperimentResult& r) { return r.aborted > 0 ? 2 : 0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active search and surveying policies over a k-NN posterior"};
  app.require_subcommand(1);

  ExperimentConfig search_cfg;
  auto* search = app.add_subcommand("run-search", "run search episodes and write per-step CSVs");
  add_common(search, search_cfg);
  search->add_option("--lookahead", search_cfg.lookahead, "policy horizon");
  search->add_flag("!--no-prune", search_cfg.prune, "disable branch-and-bound pruning");
  search->add_flag("!--no-raise-incumbent", search_cfg.raise_incumbent,
                   "keep the incumbent at the greedy seed");

  ExperimentConfig survey_cfg;
  survey_cfg.budget = 75;
  auto* survey = app.add_subcommand("run-survey", "run surveying episodes and write evaluation CSVs");
  add_common(survey, survey_cfg);
  std::string survey_policy = "survey";
  survey->add_option("--policy", survey_policy, "survey|uncertainty|random")
      ->check(CLI::IsMember({"survey", "uncertainty", "random"}));
  survey->add_option("--fraction", survey_cfg.fraction, "evaluation subsample fraction in (0,1]");
  survey->add_option("--eval-repeats", survey_cfg.eval_repeats, "evaluation subsample repeats");

  ExperimentConfig bench_cfg;
  bench_cfg.repeats = 3;
  int lookahead_max = 3;
  auto* bench = app.add_subcommand("bench-prune",
                                   "time pruned vs unpruned selection from seeded states");
  add_common(bench, bench_cfg);
  bench->add_option("--lookahead-max", lookahead_max, "benchmark horizons 2..L");

  ClumpAnalyzeConfig clump_cfg;
  auto* clump =
      app.add_subcommand("clump-analyze", "closed forms and exact policy values on clump spaces");
  clump->add_option("--space", clump_cfg.space, "clump space file: count,size,prob per line");
  clump->add_option("--ell", clump_cfg.lookahead, "lookahead horizon");
  clump->add_option("--m", clump_cfg.m, "longer comparison horizon");
  clump->add_option("--t", clump_cfg.budget, "query budget");
  clump->add_option("--crossover-k", clump_cfg.crossover_k, "large clump size for crossover rows");
  clump->add_option("--sweep", clump_cfg.sweep, "grid spec, e.g. eps=0.05:0.5:10,delta=0.1:0.6:10");
  clump->add_option("--out", clump_cfg.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (search->parsed()) {
      search_cfg.policy = PolicyKind::search;
      return exit_code(run_search_experiment(search_cfg));
    }
    if (survey->parsed()) {
      survey_cfg.policy = survey_policy == "survey"        ? PolicyKind::survey
                          : survey_policy == "uncertainty" ? PolicyKind::uncertainty
                                                           : PolicyKind::random;
      return exit_code(run_survey_experiment(survey_cfg));
    }
    if (bench->parsed()) {
      const auto rows = run_prune_benchmark(bench_cfg, lookahead_max, &std::cerr);
      for (const auto& row : rows)
        if (!row.selections_match) return 2;
      return 0;
    }
    if (clump->parsed()) {
      run_clump_analysis(clump_cfg);
      return 0;
    }
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
