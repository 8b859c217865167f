#pragma once

#include "actsearch/pruning.hpp"

namespace actsearch::detail {

struct PruneContext {
  const BoundTable* table = nullptr;  // null disables pruning
  bool raise_incumbent = true;
};

// Exact h-step expected search utility of querying x from the current state:
// posterior(x) for h = 1, else p*(1 + V1) + (1-p)*V0 where Vy is the best
// continuation after conditioning (x, y). Zero-probability branches are not
// descended. The state is restored before returning.
//
// n_path counts the fictional positive labels between the selection root and
// this node; it indexes the bound table at interior nodes.
double candidate_value(PosteriorModel& m, PointId x, int horizon, int n_path,
                       const PruneContext& ctx, SearchStats& stats);

// Max over unlabeled candidates of candidate_value, 0 when the domain is
// exhausted. With a bound table, candidates run in descending posterior
// order against a node-local incumbent seeded by the local greedy point;
// eliminated candidates provably cannot attain the max, so the returned
// value is identical to the exhaustive one.
double best_continuation(PosteriorModel& m, int horizon, int n_path,
                         const PruneContext& ctx, SearchStats& stats);

}  // namespace actsearch::detail
