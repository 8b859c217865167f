#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "actsearch/neighbors.hpp"

namespace actsearch {

// k-NN posterior (gamma + alpha) / (1 + beta): alpha counts labeled positive
// neighbors, beta counts labeled neighbors, gamma in [0,1] is a pseudocount
// prior. Counts are maintained incrementally through the reverse index, so
// one condition() costs O(|reverse set|) instead of O(N).
//
// Conditioning on a nontarget can only lower unlabeled posteriors, and the
// posterior after at most n extra positives is bounded by
// (gamma + alpha + n) / (1 + beta + n); both facts back the pruning contract.
class KnnModel final : public PosteriorModel {
 public:
  KnnModel(std::shared_ptr<const NeighborIndex> index, double gamma);

  int num_points() const override { return index_->num_points(); }
  int num_unlabeled() const override { return num_points() - labeled_count_; }
  bool is_labeled(PointId x) const override { return label_[static_cast<std::size_t>(x)] >= 0; }
  int labeled_positives() const override { return positive_count_; }

  double posterior(PointId x) const override;
  void condition(PointId x, int y) override;
  void undo_last() override;
  int undo_depth() const override { return static_cast<int>(undo_.size()); }

  std::unique_ptr<PosteriorModel> clone() const override;
  std::uint64_t fingerprint() const override;

  bool prunable() const override { return true; }
  double posterior_upper_bound(int n_extra_positives) const override;

  // Count introspection, used by consistency checks.
  int alpha(PointId x) const { return alpha_[static_cast<std::size_t>(x)]; }
  int beta(PointId x) const { return beta_[static_cast<std::size_t>(x)]; }
  int label(PointId x) const { return label_[static_cast<std::size_t>(x)]; }
  double gamma() const { return gamma_; }
  const NeighborIndex& index() const { return *index_; }

  // Observable-state equality; the undo stack is not observable.
  friend bool operator==(const KnnModel& a, const KnnModel& b) {
    return a.gamma_ == b.gamma_ && a.alpha_ == b.alpha_ && a.beta_ == b.beta_ &&
           a.label_ == b.label_;
  }

 private:
  std::shared_ptr<const NeighborIndex> index_;
  double gamma_;
  std::vector<int> alpha_;
  std::vector<int> beta_;
  std::vector<signed char> label_;  // -1 unlabeled, else 0/1
  std::vector<std::pair<PointId, signed char>> undo_;
  int labeled_count_ = 0;
  int positive_count_ = 0;
};

}  // namespace actsearch
