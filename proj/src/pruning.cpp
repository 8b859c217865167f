#include "actsearch/pruning.hpp"

#include <algorithm>
#include <string>

#include "actsearch/search_tree.hpp"

namespace actsearch {

BoundTable BoundTable::from_model(const PosteriorModel& m, int horizon) {
  if (!m.prunable())
    throw usage_error("model does not declare the pruning preconditions");
  if (horizon < 1) throw usage_error("horizon must be >= 1");
  std::vector<double> pstar(static_cast<std::size_t>(horizon) + 1);
  for (int n = 0; n <= horizon; ++n)
    pstar[static_cast<std::size_t>(n)] = m.posterior_upper_bound(n);
  return from_pstar(std::move(pstar), horizon);
}

BoundTable BoundTable::from_pstar(std::vector<double> pstar, int horizon) {
  if (horizon < 1) throw usage_error("horizon must be >= 1");
  if (pstar.size() < static_cast<std::size_t>(horizon) + 1)
    throw usage_error("pstar must cover n = 0..horizon");
  BoundTable t;
  t.horizon_ = horizon;
  t.pstar_ = std::move(pstar);
  t.ustar_.assign(static_cast<std::size_t>(horizon) + 1, {});
  // ustar[h] covers n = 0..horizon-h+1; each level consumes pstar one n higher.
  auto& u1 = t.ustar_[1];
  u1.assign(t.pstar_.begin(), t.pstar_.begin() + horizon + 1);
  for (int h = 2; h <= horizon; ++h) {
    const auto& prev = t.ustar_[static_cast<std::size_t>(h) - 1];
    auto& cur = t.ustar_[static_cast<std::size_t>(h)];
    const int n_max = horizon - h + 1;
    cur.resize(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
      const double p = t.pstar_[static_cast<std::size_t>(n)];
      cur[static_cast<std::size_t>(n)] =
          p * (prev[static_cast<std::size_t>(n) + 1] + 1.0) +
          (1.0 - p) * prev[static_cast<std::size_t>(n)];
    }
  }
  return t;
}

double BoundTable::pstar(int n) const {
  if (n < 0 || n >= static_cast<int>(pstar_.size()))
    throw usage_error("pstar index out of range");
  return pstar_[static_cast<std::size_t>(n)];
}

double BoundTable::ustar(int h, int n) const {
  if (h < 1 || h > horizon_ || n < 0 || n > horizon_ - h + 1)
    throw usage_error("ustar index (" + std::to_string(h) + ", " + std::to_string(n) +
                      ") out of range for horizon " + std::to_string(horizon_));
  return ustar_[static_cast<std::size_t>(h)][static_cast<std::size_t>(n)];
}

double candidate_upper_bound(const BoundTable& t, int h, int n, double p) {
  if (h < 2) throw usage_error("candidate bound needs horizon >= 2");
  return p * (t.ustar(h - 1, n + 1) + 1.0) + (1.0 - p) * t.ustar(h - 1, n);
}

double prune_threshold(const BoundTable& t, int h, double incumbent) {
  const double u0 = t.ustar(h - 1, 0);
  const double u1 = t.ustar(h - 1, 1);
  // Denominator is positive because ustar is non-decreasing in n.
  return (incumbent - u0) / (u1 + 1.0 - u0);
}

namespace {

// Max-posterior point, lowest id on ties.
std::optional<PointId> greedy_point(const PosteriorModel& m) {
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

std::optional<GreedyBound> greedy_lower_bound(PosteriorModel& m, int horizon,
                                              SearchStats* stats) {
  if (horizon < 1) throw usage_error("horizon must be >= 1");
  const auto g = greedy_point(m);
  if (!g) return std::nullopt;
  SearchStats local;
  detail::PruneContext ctx;  // exact, no pruning inside the seed evaluation
  const double value = detail::candidate_value(m, *g, horizon, 0, ctx, local);
  if (stats) *stats += local;
  return GreedyBound{*g, value};
}

std::optional<PointId> pruned_select(PosteriorModel& m, int horizon,
                                     const PruneOptions& opts, SearchStats* stats) {
  if (!m.prunable())
    throw usage_error("model does not declare the pruning preconditions");
  if (horizon < 1) throw usage_error("horizon must be >= 1");
  if (m.num_unlabeled() == 0) return std::nullopt;
  if (horizon == 1) return greedy_point(m);

  SearchStats local;
  const BoundTable table = BoundTable::from_model(m, horizon);
  detail::PruneContext ctx{&table, opts.raise_incumbent};

  std::vector<std::pair<double, PointId>> order;
  order.reserve(static_cast<std::size_t>(m.num_unlabeled()));
  for (PointId x = 0; x < m.num_points(); ++x)
    if (!m.is_labeled(x)) order.emplace_back(m.posterior(x), x);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });

  // Greedy seed: order[0] is the maximum-posterior point at the lowest id.
  PointId best_id = order[0].second;
  double best_value = detail::candidate_value(m, best_id, horizon, 0, ctx, local);
  double incumbent = best_value;

  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto [p, x] = order[i];
    // Strict comparison: candidates whose bound ties the incumbent survive,
    // which keeps equal-value ties visible to the lowest-id rule.
    if (candidate_upper_bound(table, horizon, 0, p) < incumbent) {
      ++local.pruned;
      continue;
    }
    const double v = detail::candidate_value(m, x, horizon, 0, ctx, local);
    if (v > best_value || (v == best_value && x < best_id)) {
      best_value = v;
      best_id = x;
    }
    if (opts.raise_incumbent && v > incumbent) incumbent = v;
  }
  if (stats) *stats += local;
  return best_id;
}

}  // namespace actsearch
