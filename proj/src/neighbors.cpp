#include "actsearch/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace actsearch {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<PointId> neighbors_of(const std::vector<std::vector<double>>& points,
                                  PointId x, int k) {
  const int n = static_cast<int>(points.size());
  std::vector<std::pair<double, PointId>> by_dist;
  by_dist.reserve(static_cast<std::size_t>(n) - 1);
  for (PointId j = 0; j < n; ++j) {
    if (j == x) continue;
    by_dist.emplace_back(squared_distance(points[static_cast<std::size_t>(x)],
                                          points[static_cast<std::size_t>(j)]),
                         j);
  }
  std::partial_sort(by_dist.begin(), by_dist.begin() + k, by_dist.end());
  std::vector<PointId> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = by_dist[static_cast<std::size_t>(i)].second;
  return out;
}

}  // namespace

NeighborIndex build_neighbor_index(const std::vector<std::vector<double>>& points,
                                   int k, bool parallel) {
  const int n = static_cast<int>(points.size());
  if (k < 1 || k >= n)
    throw config_error("neighbor count k=" + std::to_string(k) +
                       " requires 1 <= k < number of points (" + std::to_string(n) + ")");
  const std::size_t dim = points.empty() ? 0 : points[0].size();
  for (PointId i = 0; i < n; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    if (p.size() != dim)
      throw config_error("point " + std::to_string(i) + " has inconsistent dimension");
    for (double v : p)
      if (!std::isfinite(v))
        throw config_error("point " + std::to_string(i) + " has a non-finite feature");
  }

  NeighborIndex index;
  index.k = k;
  index.forward.resize(static_cast<std::size_t>(n));

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (PointId x = 0; x < n; ++x)
      index.forward[static_cast<std::size_t>(x)] = neighbors_of(points, x, k);
  } else {
    for (PointId x = 0; x < n; ++x)
      index.forward[static_cast<std::size_t>(x)] = neighbors_of(points, x, k);
  }

  index.reverse.resize(static_cast<std::size_t>(n));
  for (PointId x = 0; x < n; ++x)
    for (PointId nb : index.forward[static_cast<std::size_t>(x)])
      index.reverse[static_cast<std::size_t>(nb)].push_back(x);
  return index;
}

}  // namespace actsearch
