#include "actsearch/knn_model.hpp"

#include <string>

namespace actsearch {

KnnModel::KnnModel(std::shared_ptr<const NeighborIndex> index, double gamma)
    : index_(std::move(index)), gamma_(gamma) {
  if (!index_) throw usage_error("null neighbor index");
  if (!(gamma_ >= 0.0 && gamma_ <= 1.0))
    throw config_error("gamma must lie in [0,1], got " + std::to_string(gamma_));
  const auto n = static_cast<std::size_t>(index_->num_points());
  alpha_.assign(n, 0);
  beta_.assign(n, 0);
  label_.assign(n, -1);
}

double KnnModel::posterior(PointId x) const {
  if (is_labeled(x)) throw usage_error("posterior queried for a labeled point");
  const auto i = static_cast<std::size_t>(x);
  return (gamma_ + alpha_[i]) / (1.0 + beta_[i]);
}

void KnnModel::condition(PointId x, int y) {
  if (x < 0 || x >= num_points()) throw usage_error("point id out of range");
  if (is_labeled(x)) throw usage_error("point " + std::to_string(x) + " is already labeled");
  if (y != 0 && y != 1) throw usage_error("label must be 0 or 1");
  label_[static_cast<std::size_t>(x)] = static_cast<signed char>(y);
  ++labeled_count_;
  positive_count_ += y;
  for (PointId r : index_->reverse[static_cast<std::size_t>(x)]) {
    const auto j = static_cast<std::size_t>(r);
    ++beta_[j];
    alpha_[j] += y;
  }
  undo_.emplace_back(x, static_cast<signed char>(y));
}

void KnnModel::undo_last() {
  if (undo_.empty()) throw usage_error("undo stack is empty");
  const auto [x, y] = undo_.back();
  undo_.pop_back();
  label_[static_cast<std::size_t>(x)] = -1;
  --labeled_count_;
  positive_count_ -= y;
  for (PointId r : index_->reverse[static_cast<std::size_t>(x)]) {
    const auto j = static_cast<std::size_t>(r);
    --beta_[j];
    alpha_[j] -= y;
  }
}

std::unique_ptr<PosteriorModel> KnnModel::clone() const {
  return std::make_unique<KnnModel>(*this);
}

std::uint64_t KnnModel::fingerprint() const {
  std::uint64_t h = fnv1a(label_.data(), label_.size());
  h = fnv1a(alpha_.data(), alpha_.size() * sizeof(int), h);
  h = fnv1a(beta_.data(), beta_.size() * sizeof(int), h);
  h = fnv1a(&gamma_, sizeof(gamma_), h);
  return h;
}

double KnnModel::posterior_upper_bound(int n) const {
  if (n < 0) throw usage_error("n must be >= 0");
  if (num_unlabeled() == 0) throw usage_error("no unlabeled points remain");
  double best = 0.0;
  for (PointId x = 0; x < num_points(); ++x) {
    if (is_labeled(x)) continue;
    const auto i = static_cast<std::size_t>(x);
    const double b = (gamma_ + alpha_[i] + n) / (1.0 + beta_[i] + n);
    if (b > best) best = b;
  }
  return best;
}

}  // namespace actsearch
