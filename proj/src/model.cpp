#include "actsearch/model.hpp"

namespace actsearch {

double PosteriorModel::posterior_upper_bound(int) const {
  throw usage_error("model does not implement a posterior upper bound");
}

std::vector<PointId> unlabeled_points(const PosteriorModel& m) {
  std::vector<PointId> ids;
  ids.reserve(static_cast<std::size_t>(m.num_unlabeled()));
  for (PointId x = 0; x < m.num_points(); ++x)
    if (!m.is_labeled(x)) ids.push_back(x);
  return ids;
}

}  // namespace actsearch
