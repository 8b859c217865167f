#pragma once

#include <functional>
#include <optional>

#include "actsearch/dataset.hpp"
#include "actsearch/knn_model.hpp"
#include "actsearch/pruning.hpp"
#include "actsearch/rng.hpp"

namespace actsearch {

// Exact l-step expected search utility of querying x: the expected number of
// targets found over the next `horizon` queries, assuming optimal play after
// x. The model state is unchanged on return.
double expected_search_utility(PosteriorModel& m, PointId x, int horizon);

struct SelectOptions {
  bool prune = false;
  bool raise_incumbent = true;
  // Parallel evaluation of top-level candidates (unpruned path only; the
  // pruned path is sequential so expansion counts stay reproducible).
  bool parallel = false;
  SearchStats* stats = nullptr;
};

// Unlabeled point maximizing expected_search_utility at `horizon`; ties break
// to the lowest id. With pruning on, the result is identical to pruning off.
// Empty when the domain is exhausted.
std::optional<PointId> select_search(PosteriorModel& m, int horizon,
                                     const SelectOptions& opts = {});

// Posterior closest to 1/2, lowest id on ties.
std::optional<PointId> select_uncertainty(const PosteriorModel& m);

// Uniform over unlabeled points; reproducible under a fixed-seed rng.
std::optional<PointId> select_random(const PosteriorModel& m, Rng& rng);

enum class PolicyKind { search, survey, uncertainty, random };

struct TraceStep {
  int step = 0;  // 1-based
  PointId point = -1;
  int label = 0;
  double posterior = 0.0;  // of the queried point at query time
  int cumulative_targets = 0;
};

struct EpisodeTrace {
  std::vector<TraceStep> steps;
  int targets_found = 0;
};

struct EpisodeConfig {
  PolicyKind kind = PolicyKind::search;
  int horizon = 1;
  int budget = 0;
  bool prune = true;
  bool raise_incumbent = true;
  // Reveal one uniformly drawn target before the first query (it does not
  // count against the budget or the utility).
  bool seed_target = true;
  bool parallel = false;
  std::uint64_t seed = 0;
  double gamma = 0.1;
  // Survey-evaluation settings, only read by callbacks that need them.
  SearchStats* stats = nullptr;
};

// Called after each query has been conditioned into the model.
using StepCallback = std::function<void(const PosteriorModel&, const TraceStep&)>;

// Runs one episode: seed (optional), then select -> reveal the stored label
// -> condition, for `budget` steps. The lookahead at step i is
// min(horizon, budget - i + 1).
EpisodeTrace run_episode(const Dataset& data, const NeighborIndex& index,
                         const EpisodeConfig& cfg, const StepCallback& on_step = {});

}  // namespace actsearch
