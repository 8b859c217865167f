#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "actsearch/model.hpp"

namespace actsearch {

struct SearchStats {
  // Candidate nodes whose exact value was computed (any depth).
  std::uint64_t expansions = 0;
  // Candidate nodes eliminated by the bound test.
  std::uint64_t pruned = 0;

  SearchStats& operator+=(const SearchStats& o) {
    expansions += o.expansions;
    pruned += o.pruned;
    return *this;
  }
};

// Per-selection table of posterior and utility upper bounds for one root
// state and horizon. pstar(n) bounds every unlabeled posterior after at most
// n extra positive observations; ustar(h, n) bounds the best h-step expected
// utility from any state reachable by conditioning the root on n fictional
// positives (and any number of negatives):
//
//   ustar(1, n) = pstar(n)
//   ustar(h, n) = pstar(n) * (ustar(h-1, n+1) + 1) + (1 - pstar(n)) * ustar(h-1, n)
//
// Entries are immutable once built. Interior tree nodes reuse the root table,
// indexed by the count of fictional positives on their path.
class BoundTable {
 public:
  static BoundTable from_model(const PosteriorModel& m, int horizon);
  // Table over explicitly given pstar values (pstar[n] for n = 0..horizon).
  static BoundTable from_pstar(std::vector<double> pstar, int horizon);

  int horizon() const { return horizon_; }
  double pstar(int n) const;
  // Valid for 1 <= h <= horizon and 0 <= n <= horizon - h + 1.
  double ustar(int h, int n) const;

 private:
  BoundTable() = default;
  int horizon_ = 0;
  std::vector<double> pstar_;
  std::vector<std::vector<double>> ustar_;  // [h][n]
};

// Upper bound on the h-step expected utility of querying a point with
// posterior p from a node with n fictional positives on its path. Uses the
// same p*(1+u) + (1-p)*u expression shape as the exact recursion so the
// float-level bound >= value relation mirrors the real-arithmetic one.
double candidate_upper_bound(const BoundTable& t, int h, int n, double p);

// Posterior threshold below which no candidate can be h-step optimal given
// the incumbent lower bound. May be <= 0 (nothing prunes) or > 1.
double prune_threshold(const BoundTable& t, int h, double incumbent);

struct GreedyBound {
  PointId point = -1;  // current maximum-posterior point, lowest id on ties
  double value = 0.0;  // its exact h-step expected utility
};

// Exact lookahead value of the greedy point; a certified lower bound on the
// maximal h-step expected utility. Empty when the domain is exhausted.
std::optional<GreedyBound> greedy_lower_bound(PosteriorModel& m, int horizon,
                                              SearchStats* stats = nullptr);

struct PruneOptions {
  // Raise the incumbent to the best exact candidate value seen so far.
  // Disabled, the incumbent stays at the greedy seed at every node, which
  // prunes strictly less but matches the bound derivation literally.
  bool raise_incumbent = true;
};

// Branch-and-bound selection: same point, at the fixed lowest-id tie-break,
// as exhaustive ascending-id argmax. Throws usage_error for models that do
// not declare the pruning preconditions. Empty when the domain is exhausted.
std::optional<PointId> pruned_select(PosteriorModel& m, int horizon,
                                     const PruneOptions& opts = {},
                                     SearchStats* stats = nullptr);

}  // namespace actsearch
