#include "actsearch/search_tree.hpp"

#include <algorithm>

namespace actsearch::detail {

double candidate_value(PosteriorModel& m, PointId x, int horizon, int n_path,
                       const PruneContext& ctx, SearchStats& stats) {
  ++stats.expansions;
  const double p = m.posterior(x);
  if (horizon == 1) return p;

  double v1 = 0.0;
  if (p > 0.0) {
    m.condition(x, 1);
    v1 = best_continuation(m, horizon - 1, n_path + 1, ctx, stats);
    m.undo_last();
  }
  double v0 = 0.0;
  if (p < 1.0) {
    m.condition(x, 0);
    v0 = best_continuation(m, horizon - 1, n_path, ctx, stats);
    m.undo_last();
  }
  return p * (1.0 + v1) + (1.0 - p) * v0;
}

double best_continuation(PosteriorModel& m, int horizon, int n_path,
                         const PruneContext& ctx, SearchStats& stats) {
  const int n_points = m.num_points();
  if (m.num_unlabeled() == 0) return 0.0;

  if (horizon == 1) {
    // Leaf: the best continuation is the maximum posterior.
    double best = 0.0;
    for (PointId x = 0; x < n_points; ++x)
      if (!m.is_labeled(x)) best = std::max(best, m.posterior(x));
    return best;
  }

  if (ctx.table == nullptr) {
    double best = 0.0;
    bool first = true;
    for (PointId x = 0; x < n_points; ++x) {
      if (m.is_labeled(x)) continue;
      const double v = candidate_value(m, x, horizon, n_path, ctx, stats);
      if (first || v > best) {
        best = v;
        first = false;
      }
    }
    return best;
  }

  // Pruned node: descending posterior order (ties ascending id) grows the
  // local incumbent fastest. The first candidate is the local greedy point.
  std::vector<std::pair<double, PointId>> order;
  order.reserve(static_cast<std::size_t>(m.num_unlabeled()));
  for (PointId x = 0; x < n_points; ++x)
    if (!m.is_labeled(x)) order.emplace_back(m.posterior(x), x);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });

  double incumbent =
      candidate_value(m, order[0].second, horizon, n_path, ctx, stats);
  double best = incumbent;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto [p, x] = order[i];
    if (candidate_upper_bound(*ctx.table, horizon, n_path, p) < incumbent) {
      ++stats.pruned;
      continue;
    }
    const double v = candidate_value(m, x, horizon, n_path, ctx, stats);
    best = std::max(best, v);
    if (ctx.raise_incumbent && v > incumbent) incumbent = v;
  }
  return best;
}

}  // namespace actsearch::detail
