// Independent reference implementations used to freeze expected values.
// Nothing here shares code with the library's incremental/recursive paths:
// posteriors are recounted from scratch, lookahead enumerates label
// sequences over copied label maps, and count moments come from the full
// 2^U outcome distribution.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracles {

struct NaiveKnn {
  std::vector<std::vector<int>> nn;  // k nearest by (distance, id)
  double gamma = 0.1;
};

inline NaiveKnn naive_knn(const std::vector<std::vector<double>>& points, int k,
                          double gamma) {
  NaiveKnn out;
  out.gamma = gamma;
  const int n = static_cast<int>(points.size());
  out.nn.resize(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    std::vector<std::pair<double, int>> d;
    for (int j = 0; j < n; ++j) {
      if (j == x) continue;
      double s = 0.0;
      for (std::size_t f = 0; f < points[static_cast<std::size_t>(x)].size(); ++f) {
        const double diff = points[static_cast<std::size_t>(x)][f] - points[static_cast<std::size_t>(j)][f];
        s += diff * diff;
      }
      d.emplace_back(s, j);
    }
    std::sort(d.begin(), d.end());
    for (int i = 0; i < k; ++i) out.nn[static_cast<std::size_t>(x)].push_back(d[static_cast<std::size_t>(i)].second);
  }
  return out;
}

// labels: -1 unlabeled, else 0/1.
inline double naive_posterior(const NaiveKnn& knn, const std::vector<int>& labels, int x) {
  int alpha = 0;
  int beta = 0;
  for (int nb : knn.nn[static_cast<std::size_t>(x)]) {
    if (labels[static_cast<std::size_t>(nb)] < 0) continue;
    ++beta;
    alpha += labels[static_cast<std::size_t>(nb)];
  }
  return (knn.gamma + alpha) / (1.0 + beta);
}

inline double naive_expectimax(const NaiveKnn& knn, const std::vector<int>& labels, int x,
                               int horizon);

inline double naive_best(const NaiveKnn& knn, const std::vector<int>& labels, int horizon) {
  double best = 0.0;
  for (int x = 0; x < static_cast<int>(labels.size()); ++x) {
    if (labels[static_cast<std::size_t>(x)] >= 0) continue;
    best = std::max(best, naive_expectimax(knn, labels, x, horizon));
  }
  return best;
}

inline double naive_expectimax(const NaiveKnn& knn, const std::vector<int>& labels, int x,
                               int horizon) {
  const double p = naive_posterior(knn, labels, x);
  if (horizon == 1) return p;
  auto l1 = labels;
  l1[static_cast<std::size_t>(x)] = 1;
  const double v1 = naive_best(knn, l1, horizon - 1);
  auto l0 = labels;
  l0[static_cast<std::size_t>(x)] = 0;
  const double v0 = naive_best(knn, l0, horizon - 1);
  return p * (1.0 + v1) + (1.0 - p) * v0;
}

// Supremum of any unlabeled point's posterior over every additional
// observation set with at most n positives, by exhaustive enumeration of
// {untouched, 0, 1} assignments over the currently unlabeled points.
inline double enumerate_max_posterior(const NaiveKnn& knn, const std::vector<int>& labels,
                                      int n_positives) {
  std::vector<int> unlabeled;
  for (int x = 0; x < static_cast<int>(labels.size()); ++x)
    if (labels[static_cast<std::size_t>(x)] < 0) unlabeled.push_back(x);

  double sup = 0.0;
  std::vector<int> work = labels;
  const auto recurse = [&](auto&& self, std::size_t i, int ones_left) -> void {
    if (i == unlabeled.size()) {
      for (int x : unlabeled)
        if (work[static_cast<std::size_t>(x)] < 0)
          sup = std::max(sup, naive_posterior(knn, work, x));
      return;
    }
    const int x = unlabeled[i];
    self(self, i + 1, ones_left);  // leave unlabeled
    work[static_cast<std::size_t>(x)] = 0;
    self(self, i + 1, ones_left);
    if (ones_left > 0) {
      work[static_cast<std::size_t>(x)] = 1;
      self(self, i + 1, ones_left - 1);
    }
    work[static_cast<std::size_t>(x)] = -1;
  };
  recurse(recurse, 0, n_positives);
  return sup;
}

// Exact mean/variance of (labeled positives + sum of unlabeled labels) under
// independent Bernoulli(p_i), by enumerating all 2^U outcomes.
inline std::pair<double, double> enumerate_count_moments(const std::vector<double>& probs,
                                                         int labeled_positives) {
  const std::size_t u = probs.size();
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << u); ++mask) {
    double w = 1.0;
    int count = labeled_positives;
    for (std::size_t i = 0; i < u; ++i) {
      if (mask & (std::size_t{1} << i)) {
        w *= probs[i];
        ++count;
      } else {
        w *= 1.0 - probs[i];
      }
    }
    mean += w * count;
    second += w * count * count;
  }
  return {mean, second - mean * mean};
}

struct RandomInstance {
  std::vector<std::vector<double>> points;
  int k = 1;
  std::vector<int> labels;  // -1 unlabeled
};

inline RandomInstance random_instance(std::uint64_t seed, int min_points, int max_points,
                                      int max_k, int max_prelabeled) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_dist(min_points, max_points);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  RandomInstance inst;
  const int n = n_dist(rng);
  std::uniform_int_distribution<int> k_dist(1, std::min(max_k, n - 1));
  inst.k = k_dist(rng);
  for (int i = 0; i < n; ++i) inst.points.push_back({coord(rng), coord(rng)});
  inst.labels.assign(static_cast<std::size_t>(n), -1);
  std::uniform_int_distribution<int> pre_dist(0, std::min(max_prelabeled, n - 1));
  const int pre = pre_dist(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < pre; ++i) inst.labels[static_cast<std::size_t>(pick(rng))] = coin(rng);
  return inst;
}

}  // namespace oracles
