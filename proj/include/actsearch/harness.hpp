#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "actsearch/clumps.hpp"
#include "actsearch/policy.hpp"

namespace actsearch {

struct ExperimentConfig {
  std::string data;  // CSV path, or "disks:N"
  PolicyKind policy = PolicyKind::search;
  int lookahead = 1;
  int budget = 10;
  int k = 50;
  double gamma = 0.1;
  bool prune = true;
  bool raise_incumbent = true;
  bool seed_target = true;
  int repeats = 1;
  std::uint64_t seed = 0;
  // Survey-evaluation protocol.
  double fraction = 0.05;
  int eval_repeats = 5;
  bool parallel = true;
  std::filesystem::path out;
};

// "disks:N" generates from the seed; anything else loads a dataset CSV.
Dataset resolve_dataset(const std::string& source, std::uint64_t seed);

struct ExperimentResult {
  int completed = 0;
  int aborted = 0;  // episodes that ended with a recorded error
};

// Writes steps.csv, summary.csv (mean cumulative targets per step plus the
// exact random-expectation line step * targets / N) and, on aborts,
// errors.csv. Fully deterministic under (config, seed).
ExperimentResult run_search_experiment(const ExperimentConfig& cfg);

// Writes survey_steps.csv (per-step count moments, moment-matched beta and
// its density at the true class proportion) and survey_summary.csv.
// Infeasible-moment steps are logged to errors.csv and skipped.
ExperimentResult run_survey_experiment(const ExperimentConfig& cfg);

struct PruneBenchRow {
  int lookahead = 0;
  int repeat = 0;
  std::uint64_t pruned_expansions = 0;
  std::uint64_t unpruned_expansions = 0;
  double pruned_seconds = 0.0;
  double unpruned_seconds = 0.0;
  bool selections_match = false;
};

// Times one pruned and one unpruned selection per (lookahead, repeat) from
// identical seeded states; writes bench.csv. All columns except the two
// timing ones are deterministic under (config, seed).
std::vector<PruneBenchRow> run_prune_benchmark(const ExperimentConfig& cfg, int lookahead_max,
                                               std::ostream* log = nullptr);

struct ClumpAnalyzeConfig {
  std::filesystem::path space;  // optional
  int lookahead = 1;
  int m = 0;        // 0: no m-step comparison / crossover
  int budget = 1;   // t
  int crossover_k = 0;  // 0: skip crossover rows
  std::string sweep;    // "eps=lo:hi:n,delta=lo:hi:n"
  std::filesystem::path out;
};

// Writes space_values.csv for --space, sweep.csv for --sweep, and
// crossover.csv when m and crossover_k are set.
void run_clump_analysis(const ClumpAnalyzeConfig& cfg);

}  // namespace actsearch
