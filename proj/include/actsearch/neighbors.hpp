#pragma once

#include <vector>

#include "actsearch/model.hpp"

namespace actsearch {

// Directed k-nearest-neighbor index over a fixed point set, plus its exact
// transpose. Immutable after construction and shareable across threads.
struct NeighborIndex {
  int k = 0;
  // Per point: its k nearest neighbors, ascending distance, distance ties
  // broken by ascending id. The relation is directed.
  std::vector<std::vector<PointId>> forward;
  // Per point: the points that list it, ascending id.
  std::vector<std::vector<PointId>> reverse;

  int num_points() const { return static_cast<int>(forward.size()); }
};

// Throws config_error when k < 1 or k >= points.size(), or on non-finite
// feature values. The parallel path gives bit-identical output.
NeighborIndex build_neighbor_index(const std::vector<std::vector<double>>& points,
                                   int k, bool parallel = false);

}  // namespace actsearch
