#pragma once

#include <filesystem>
#include <optional>

#include "actsearch/model.hpp"

namespace actsearch {

// k points with perfectly correlated labels, jointly targets with marginal
// probability prob.
struct Clump {
  int size = 1;
  double prob = 0.5;
};

// A disjoint union of independent clumps. Point ids are laid out clump by
// clump in list order.
struct ClumpSpace {
  std::vector<Clump> clumps;

  int num_points() const;
  void validate() const;  // sizes >= 1, probs in (0,1)
};

// One clump per line: count,size,prob (count = number of identical clumps).
// Lines starting with '#' are skipped.
ClumpSpace load_clump_space(const std::filesystem::path& path);

// The clump space as a pluggable posterior model: a member's posterior is
// the clump marginal while the clump is unobserved, 1 after a revealed
// target, 0 after a revealed nontarget.
class ClumpModel final : public PosteriorModel {
 public:
  explicit ClumpModel(ClumpSpace space);

  int num_points() const override { return total_points_; }
  int num_unlabeled() const override { return total_points_ - queried_total_; }
  bool is_labeled(PointId x) const override { return queried_[static_cast<std::size_t>(x)]; }
  int labeled_positives() const override { return positives_; }
  double posterior(PointId x) const override;
  void condition(PointId x, int y) override;
  void undo_last() override;
  int undo_depth() const override { return static_cast<int>(undo_.size()); }
  std::unique_ptr<PosteriorModel> clone() const override;
  std::uint64_t fingerprint() const override;

  bool prunable() const override { return true; }
  double posterior_upper_bound(int n_extra_positives) const override;

  int clump_of(PointId x) const { return clump_of_[static_cast<std::size_t>(x)]; }
  const ClumpSpace& space() const { return space_; }

 private:
  enum Status : signed char { kUnobserved = 0, kTarget = 1, kNontarget = 2 };
  struct UndoRecord {
    PointId point;
    signed char label;
    signed char prev_status;
  };

  ClumpSpace space_;
  int total_points_ = 0;
  std::vector<int> clump_of_;
  std::vector<signed char> status_;   // per clump
  std::vector<signed char> queried_;  // per point
  std::vector<UndoRecord> undo_;
  int queried_total_ = 0;
  int positives_ = 0;
};

// Exact expected utility of running the l-step lookahead policy for `budget`
// queries on the space, with the policy's own lowest-id tie-broken decisions
// simulated exactly (dynamic programming over clump statuses).
double exact_policy_value(const ClumpSpace& space, int lookahead, int budget);

// Exact `horizon`-step lookahead value of first querying a member of
// clumps[clump_index] on a fresh space.
double clump_query_value(const ClumpSpace& space, int clump_index, int horizon);

// Expected t-query utility of the lookahead policy on t identical clumps:
// sum_{i=1..t} eps (1-eps)^{i-1} (t-i+1). Checked against the closed form
// ((1-eps)^{t+1} + eps t + eps - 1) / eps to 1e-12.
double eq2_value(double eps, int t);
double eq2_closed_form(double eps, int t);

// Upper bound (t+l) delta l / (delta (l-1) + 1) on the l-step policy value
// over the augmented space.
double eq3_bound(double delta, int lookahead, int t);

// l-step lookahead value advantage of an unobserved delta-clump point over
// an unobserved eps-clump point; positive whenever eps < delta.
double clump_difference(double eps, double delta, int lookahead);

struct CrossoverResult {
  double eps = 0.0;
  double large_clump_value = 0.0;  // m-step value of the size-k eps-clump point
  double small_clump_value = 0.0;  // m-step value of the size-l delta-clump point
};

// Searches by bisection for an eps < delta whose size-k eps-clump beats the
// size-l delta-clump under m-step lookahead; the result is certified by
// re-evaluating both sides. Empty when no certified eps is found.
std::optional<CrossoverResult> lemma1_crossover(int lookahead, int m, int k, double delta);

// The ratio lower bound ((1-eps)^{t+1} + eps t + eps - 1)(delta (l-1) + 1) /
// (eps delta l (t + l)); checked against eq2_value / eq3_bound.
double theorem1_ratio_bound(double eps, double delta, int lookahead, int t);

}  // namespace actsearch
