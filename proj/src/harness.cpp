#include "actsearch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "actsearch/csv.hpp"
#include "actsearch/surveying.hpp"

namespace actsearch {

namespace {

namespace fs = std::filesystem;

struct EpisodeSlot {
  bool ok = false;
  std::string error;
  EpisodeTrace trace;
};

struct StepEval {
  int step = 0;
  double count_mean = 0.0;
  double count_variance = 0.0;
  bool beta_ok = false;
  double a = 0.0;
  double b = 0.0;
  double density = 0.0;
  std::string eval_error;
};

void ensure_out_dir(const fs::path& out) {
  if (out.empty()) throw config_error("output directory is required");
  fs::create_directories(out);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Dataset resolve_dataset(const std::string& source, std::uint64_t seed) {
  if (source.rfind("disks:", 0) == 0) {
    const std::string count = source.substr(6);
    int n = 0;
    try {
      n = std::stoi(count);
    } catch (const std::exception&) {
      throw config_error("malformed dataset spec '" + source + "'");
    }
    return generate_disks(n, seed);
  }
  return load_dataset(source);
}

ExperimentResult run_search_experiment(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg.out);
  const Dataset data = resolve_dataset(cfg.data, cfg.seed);
  const NeighborIndex index = build_neighbor_index(data.features, cfg.k, cfg.parallel);

  std::vector<EpisodeSlot> slots(static_cast<std::size_t>(cfg.repeats));
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (int r = 0; r < cfg.repeats; ++r) {
    auto& slot = slots[static_cast<std::size_t>(r)];
    try {
      EpisodeConfig ep;
      ep.kind = cfg.policy;
      ep.horizon = cfg.lookahead;
      ep.budget = cfg.budget;
      ep.prune = cfg.prune;
      ep.raise_incumbent = cfg.raise_incumbent;
      ep.seed_target = cfg.seed_target;
      ep.parallel = cfg.parallel;
      ep.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
      ep.gamma = cfg.gamma;
      slot.trace = run_episode(data, index, ep);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  }

  {
    CsvWriter steps(cfg.out / "steps.csv",
                    {"repeat", "step", "point_id", "label", "posterior", "cumulative_targets"});
    for (int r = 0; r < cfg.repeats; ++r) {
      const auto& slot = slots[static_cast<std::size_t>(r)];
      if (!slot.ok) continue;
      for (const auto& s : slot.trace.steps)
        steps.row(r, s.step, s.point, s.label, s.posterior, s.cumulative_targets);
    }
  }
  {
    const double prevalence =
        static_cast<double>(data.target_count()) / static_cast<double>(data.num_points());
    CsvWriter summary(cfg.out / "summary.csv",
                      {"step", "mean_cumulative_targets", "random_expectation"});
    int completed = 0;
    for (const auto& slot : slots) completed += slot.ok ? 1 : 0;
    for (int step = 1; step <= cfg.budget; ++step) {
      double total = 0.0;
      for (const auto& slot : slots)
        if (slot.ok) total += slot.trace.steps[static_cast<std::size_t>(step) - 1].cumulative_targets;
      const double mean = completed > 0 ? total / completed : 0.0;
      summary.row(step, mean, static_cast<double>(step) * prevalence);
    }
  }

  ExperimentResult result;
  for (const auto& slot : slots) (slot.ok ? result.completed : result.aborted)++;
  if (result.aborted > 0) {
    CsvWriter errors(cfg.out / "errors.csv", {"repeat", "step", "reason"});
    for (int r = 0; r < cfg.repeats; ++r)
      if (!slots[static_cast<std::size_t>(r)].ok)
        errors.row(r, 0, slots[static_cast<std::size_t>(r)].error);
  }
  return result;
}

ExperimentResult run_survey_experiment(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg.out);
  const Dataset data = resolve_dataset(cfg.data, cfg.seed);
  const NeighborIndex index = build_neighbor_index(data.features, cfg.k, cfg.parallel);
  const double true_proportion =
      static_cast<double>(data.target_count()) / static_cast<double>(data.num_points());

  std::vector<EpisodeSlot> slots(static_cast<std::size_t>(cfg.repeats));
  std::vector<std::vector<StepEval>> evals(static_cast<std::size_t>(cfg.repeats));

#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (int r = 0; r < cfg.repeats; ++r) {
    auto& slot = slots[static_cast<std::size_t>(r)];
    auto& eval = evals[static_cast<std::size_t>(r)];
    try {
      Rng eval_rng(derive_seed(cfg.seed, 0x53555256ULL + static_cast<std::uint64_t>(r)));
      EpisodeConfig ep;
      ep.kind = cfg.policy;
      ep.horizon = cfg.lookahead;
      ep.budget = cfg.budget;
      ep.prune = cfg.prune;
      ep.seed_target = cfg.seed_target;
      ep.parallel = cfg.parallel;
      ep.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
      ep.gamma = cfg.gamma;
      const auto on_step = [&](const PosteriorModel& m, const TraceStep& s) {
        StepEval e;
        e.step = s.step;
        const CountPosterior cp =
            subsampled_count_posterior(m, cfg.fraction, cfg.eval_repeats, eval_rng);
        e.count_mean = cp.mean;
        e.count_variance = cp.variance;
        try {
          const SurveyPosterior sp = survey_posterior(cp, m.num_points());
          e.a = sp.beta.a;
          e.b = sp.beta.b;
          e.density = beta_density(sp.beta.a, sp.beta.b, true_proportion);
          e.beta_ok = true;
        } catch (const std::domain_error& err) {
          e.eval_error = err.what();
        }
        eval.push_back(e);
      };
      slot.trace = run_episode(data, index, ep, on_step);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  }

  {
    CsvWriter steps(cfg.out / "survey_steps.csv",
                    {"repeat", "step", "point_id", "label", "count_mean", "count_variance",
                     "beta_a", "beta_b", "density_at_true_proportion"});
    for (int r = 0; r < cfg.repeats; ++r) {
      const auto& slot = slots[static_cast<std::size_t>(r)];
      if (!slot.ok) continue;
      const auto& eval = evals[static_cast<std::size_t>(r)];
      for (std::size_t i = 0; i < slot.trace.steps.size(); ++i) {
        const auto& s = slot.trace.steps[i];
        const auto& e = eval[i];
        if (e.beta_ok)
          steps.row(r, s.step, s.point, s.label, e.count_mean, e.count_variance, e.a, e.b,
                    e.density);
        else
          steps.row(r, s.step, s.point, s.label, e.count_mean, e.count_variance, "", "", "");
      }
    }
  }
  {
    CsvWriter summary(cfg.out / "survey_summary.csv",
                      {"step", "mean_count_mean", "mean_count_variance",
                       "mean_density_at_true_proportion"});
    for (int step = 1; step <= cfg.budget; ++step) {
      double mean_m = 0.0, mean_v = 0.0, mean_d = 0.0;
      int n_ok = 0, n_beta = 0;
      for (int r = 0; r < cfg.repeats; ++r) {
        if (!slots[static_cast<std::size_t>(r)].ok) continue;
        const auto& e = evals[static_cast<std::size_t>(r)][static_cast<std::size_t>(step) - 1];
        mean_m += e.count_mean;
        mean_v += e.count_variance;
        ++n_ok;
        if (e.beta_ok) {
          mean_d += e.density;
          ++n_beta;
        }
      }
      summary.row(step, n_ok ? mean_m / n_ok : 0.0, n_ok ? mean_v / n_ok : 0.0,
                  n_beta ? mean_d / n_beta : 0.0);
    }
  }

  ExperimentResult result;
  for (const auto& slot : slots) (slot.ok ? result.completed : result.aborted)++;
  bool any_eval_error = false;
  for (const auto& eval : evals)
    for (const auto& e : eval)
      if (!e.eval_error.empty()) any_eval_error = true;
  if (result.aborted > 0 || any_eval_error) {
    CsvWriter errors(cfg.out / "errors.csv", {"repeat", "step", "reason"});
    for (int r = 0; r < cfg.repeats; ++r) {
      if (!slots[static_cast<std::size_t>(r)].ok)
        errors.row(r, 0, slots[static_cast<std::size_t>(r)].error);
      for (const auto& e : evals[static_cast<std::size_t>(r)])
        if (!e.eval_error.empty()) errors.row(r, e.step, e.eval_error);
    }
  }
  return result;
}

std::vector<PruneBenchRow> run_prune_benchmark(const ExperimentConfig& cfg, int lookahead_max,
                                               std::ostream* log) {
  ensure_out_dir(cfg.out);
  if (lookahead_max < 2) throw config_error("lookahead-max must be >= 2");
  const Dataset data = resolve_dataset(cfg.data, cfg.seed);
  const auto index =
      std::make_shared<const NeighborIndex>(build_neighbor_index(data.features, cfg.k, cfg.parallel));

  std::vector<PointId> targets;
  for (PointId x = 0; x < data.num_points(); ++x)
    if (data.labels[static_cast<std::size_t>(x)] == 1) targets.push_back(x);

  std::vector<PruneBenchRow> rows;
  for (int ell = 2; ell <= lookahead_max; ++ell) {
    for (int r = 0; r < cfg.repeats; ++r) {
      // Starting configuration: one random revealed target, as in episodes.
      KnnModel model(index, cfg.gamma);
      if (cfg.seed_target) {
        if (targets.empty()) throw config_error("dataset has no targets to seed");
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
        model.condition(targets[pick(rng)], 1);
      }

      PruneBenchRow row;
      row.lookahead = ell;
      row.repeat = r;

      SearchStats pruned_stats;
      auto t0 = std::chrono::steady_clock::now();
      const auto pruned = pruned_select(model, ell, PruneOptions{cfg.raise_incumbent}, &pruned_stats);
      row.pruned_seconds = seconds_since(t0);
      row.pruned_expansions = pruned_stats.expansions;

      SearchStats plain_stats;
      t0 = std::chrono::steady_clock::now();
      const auto plain =
          select_search(model, ell, SelectOptions{false, true, false, &plain_stats});
      row.unpruned_seconds = seconds_since(t0);
      row.unpruned_expansions = plain_stats.expansions;

      row.selections_match = pruned.has_value() && plain.has_value() && *pruned == *plain;
      rows.push_back(row);
      if (log)
        *log << "lookahead " << ell << " repeat " << r << ": expansions "
             << row.pruned_expansions << " vs " << row.unpruned_expansions << ", seconds "
             << row.pruned_seconds << " vs " << row.unpruned_seconds
             << (row.selections_match ? "" : "  [MISMATCH]") << '\n';
    }
  }

  CsvWriter out(cfg.out / "bench.csv",
                {"lookahead", "repeat", "pruned_expansions", "unpruned_expansions",
                 "pruned_seconds", "unpruned_seconds", "selections_match"});
  for (const auto& row : rows)
    out.row(row.lookahead, row.repeat, row.pruned_expansions, row.unpruned_expansions,
            row.pruned_seconds, row.unpruned_seconds, row.selections_match ? 1 : 0);
  return rows;
}

namespace {

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  double value(int i) const {
    if (n == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

GridAxis parse_axis(const std::string& spec) {
  GridAxis axis;
  std::istringstream ss(spec);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  try {
    if (parts.size() == 1) {
      axis.lo = axis.hi = std::stod(parts[0]);
      axis.n = 1;
    } else if (parts.size() == 3) {
      axis.lo = std::stod(parts[0]);
      axis.hi = std::stod(parts[1]);
      axis.n = std::stoi(parts[2]);
    } else {
      throw std::invalid_argument("spec");
    }
  } catch (const std::exception&) {
    throw config_error("malformed grid axis '" + spec + "' (want lo:hi:n or a single value)");
  }
  if (axis.n < 1) throw config_error("grid axis needs n >= 1");
  return axis;
}

}  // namespace

void run_clump_analysis(const ClumpAnalyzeConfig& cfg) {
  ensure_out_dir(cfg.out);
  if (cfg.lookahead < 1) throw config_error("ell must be >= 1");
  if (cfg.budget < 1) throw config_error("t must be >= 1");

  if (!cfg.space.empty()) {
    const ClumpSpace space = load_clump_space(cfg.space);
    if (cfg.budget > space.num_points())
      throw config_error("t exceeds the space's point count");
    CsvWriter values(cfg.out / "space_values.csv", {"ell", "t", "value"});
    values.row(cfg.lookahead, cfg.budget, exact_policy_value(space, cfg.lookahead, cfg.budget));
    if (cfg.m >= 1)
      values.row(cfg.m, cfg.budget, exact_policy_value(space, cfg.m, cfg.budget));
  }

  if (!cfg.sweep.empty()) {
    GridAxis eps_axis, delta_axis;
    bool have_eps = false, have_delta = false;
    std::istringstream ss(cfg.sweep);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw config_error("malformed sweep part '" + part + "'");
      const std::string name = part.substr(0, eq);
      const GridAxis axis = parse_axis(part.substr(eq + 1));
      if (name == "eps") {
        eps_axis = axis;
        have_eps = true;
      } else if (name == "delta") {
        delta_axis = axis;
        have_delta = true;
      } else {
        throw config_error("unknown sweep axis '" + name + "'");
      }
    }
    if (!have_eps || !have_delta)
      throw config_error("sweep needs both eps=... and delta=...");

    CsvWriter sweep(cfg.out / "sweep.csv",
                    {"eps", "delta", "ell", "m", "t", "eq2_value", "eq3_bound",
                     "clump_difference", "ratio_bound"});
    for (int i = 0; i < eps_axis.n; ++i) {
      for (int j = 0; j < delta_axis.n; ++j) {
        const double eps = eps_axis.value(i);
        const double delta = delta_axis.value(j);
        if (!(eps > 0.0 && eps < delta && delta < 1.0)) continue;
        sweep.row(eps, delta, cfg.lookahead, cfg.m, cfg.budget, eq2_value(eps, cfg.budget),
                  eq3_bound(delta, cfg.lookahead, cfg.budget),
                  clump_difference(eps, delta, cfg.lookahead),
                  theorem1_ratio_bound(eps, delta, cfg.lookahead, cfg.budget));
      }
    }

    if (cfg.m >= 1 && cfg.crossover_k >= 1) {
      CsvWriter cross(cfg.out / "crossover.csv",
                      {"ell", "m", "k", "delta", "eps", "large_clump_value",
                       "small_clump_value", "certified"});
      for (int j = 0; j < delta_axis.n; ++j) {
        const double delta = delta_axis.value(j);
        if (!(delta > 0.0 && delta < 1.0)) continue;
        const auto res = lemma1_crossover(cfg.lookahead, cfg.m, cfg.crossover_k, delta);
        if (res)
          cross.row(cfg.lookahead, cfg.m, cfg.crossover_k, delta, res->eps,
                    res->large_clump_value, res->small_clump_value, 1);
        else
          cross.row(cfg.lookahead, cfg.m, cfg.crossover_k, delta, "", "", "", 0);
      }
    }
  }
}

}  // namespace actsearch
