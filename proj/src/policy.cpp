#include "actsearch/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "actsearch/search_tree.hpp"
#include "actsearch/surveying.hpp"

namespace actsearch {

double expected_search_utility(PosteriorModel& m, PointId x, int horizon) {
  if (horizon < 1) throw usage_error("horizon must be >= 1");
  if (x < 0 || x >= m.num_points()) throw usage_error("point id out of range");
  if (m.is_labeled(x)) throw usage_error("point " + std::to_string(x) + " is already labeled");
  detail::PruneContext ctx;
  SearchStats stats;
  return detail::candidate_value(m, x, horizon, 0, ctx, stats);
}

namespace {

std::optional<PointId> argmax_posterior(const PosteriorModel& m) {
  PointId best = -1;
  double best_p = -1.0;
  for (PointId x = 0; x < m.num_points(); ++x) {
    if (m.is_labeled(x)) continue;
    const double p = m.posterior(x);
    if (p > best_p) {
      best_p = p;
      best = x;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

}  // namespace

std::optional<PointId> select_search(PosteriorModel& m, int horizon,
                                     const SelectOptions& opts) {
  if (horizon < 1) throw usage_error("horizon must be >= 1");
  if (m.num_unlabeled() == 0) return std::nullopt;
  if (horizon == 1) return argmax_posterior(m);
  if (opts.prune)
    return pruned_select(m, horizon, PruneOptions{opts.raise_incumbent}, opts.stats);

  const auto candidates = unlabeled_points(m);
  std::vector<double> values(candidates.size());
  SearchStats stats;
  detail::PruneContext ctx;

  if (opts.parallel && candidates.size() > 1) {
#pragma omp parallel
    {
      auto local = m.clone();
      SearchStats local_stats;
#pragma omp for schedule(dynamic)
      for (int i = 0; i < static_cast<int>(candidates.size()); ++i)
        values[static_cast<std::size_t>(i)] = detail::candidate_value(
            *local, candidates[static_cast<std::size_t>(i)], horizon, 0, ctx, local_stats);
#pragma omp critical
      stats += local_stats;
    }
  } else {
    for (std::size_t i = 0; i < candidates.size(); ++i)
      values[i] = detail::candidate_value(m, candidates[i], horizon, 0, ctx, stats);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (values[i] > values[best]) best = i;  // candidates ascend, so ties keep the lowest id
  if (opts.stats) *opts.stats += stats;
  return candidates[best];
}

std::optional<PointId> select_uncertainty(const PosteriorModel& m) {
  PointId best = -1;
  double best_d = 2.0;
  for (PointId x = 0; x < m.num_points(); ++x) {
    if (m.is_labeled(x)) continue;
    const double d = std::abs(m.posterior(x) - 0.5);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::optional<PointId> select_random(const PosteriorModel& m, Rng& rng) {
  const auto candidates = unlabeled_points(m);
  if (candidates.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng)];
}

EpisodeTrace run_episode(const Dataset& data, const NeighborIndex& index,
                         const EpisodeConfig& cfg, const StepCallback& on_step) {
  if (cfg.budget < 0) throw config_error("budget must be >= 0");
  if (index.num_points() != data.num_points())
    throw usage_error("index and dataset disagree on the point count");

  auto shared = std::make_shared<const NeighborIndex>(index);
  KnnModel model(shared, cfg.gamma);
  Rng rng(cfg.seed);

  if (cfg.seed_target) {
    std::vector<PointId> targets;
    for (PointId x = 0; x < data.num_points(); ++x)
      if (data.labels[static_cast<std::size_t>(x)] == 1) targets.push_back(x);
    if (targets.empty())
      throw config_error("cannot seed a training target: the dataset has none");
    std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
    model.condition(targets[pick(rng)], 1);
  }

  if (cfg.budget > model.num_unlabeled())
    throw config_error("budget " + std::to_string(cfg.budget) + " exceeds the unlabeled pool (" +
                       std::to_string(model.num_unlabeled()) + ")");

  EpisodeTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(cfg.budget));
  for (int i = 1; i <= cfg.budget; ++i) {
    const int remaining = cfg.budget - i + 1;
    const int horizon = std::min(std::max(cfg.horizon, 1), remaining);
    std::optional<PointId> choice;
    switch (cfg.kind) {
      case PolicyKind::search:
        choice = select_search(model, horizon,
                               SelectOptions{cfg.prune, cfg.raise_incumbent,
                                             cfg.parallel, cfg.stats});
        break;
      case PolicyKind::uncertainty:
        choice = select_uncertainty(model);
        break;
      case PolicyKind::random:
        choice = select_random(model, rng);
        break;
      case PolicyKind::survey:
        choice = select_survey(model, cfg.parallel);
        break;
    }
    if (!choice) throw usage_error("domain exhausted before the budget");

    TraceStep step;
    step.step = i;
    step.point = *choice;
    step.posterior = model.posterior(*choice);
    step.label = data.labels[static_cast<std::size_t>(*choice)];
    trace.targets_found += step.label;
    step.cumulative_targets = trace.targets_found;
    model.condition(*choice, step.label);
    trace.steps.push_back(step);
    if (on_step) on_step(model, step);
  }
  return trace;
}

}  // namespace actsearch
