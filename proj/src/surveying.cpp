#include "actsearch/surveying.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace actsearch {

CountPosterior count_posterior(const PosteriorModel& m) {
  CountPosterior out;
  out.mean = static_cast<double>(m.labeled_positives());
  for (PointId x = 0; x < m.num_points(); ++x) {
    if (m.is_labeled(x)) continue;
    const double p = m.posterior(x);
    out.mean += p;
    out.variance += p * (1.0 - p);
  }
  return out;
}

double expected_survey_utility(PosteriorModel& m, PointId x) {
  if (x < 0 || x >= m.num_points()) throw usage_error("point id out of range");
  if (m.is_labeled(x)) throw usage_error("point " + std::to_string(x) + " is already labeled");
  const double p = m.posterior(x);
  m.condition(x, 1);
  const double var1 = count_posterior(m).variance;
  m.undo_last();
  m.condition(x, 0);
  const double var0 = count_posterior(m).variance;
  m.undo_last();
  return p * (-var1) + (1.0 - p) * (-var0);
}

std::optional<PointId> select_survey(PosteriorModel& m, bool parallel) {
  const auto candidates = unlabeled_points(m);
  if (candidates.empty()) return std::nullopt;
  std::vector<double> values(candidates.size());
  if (parallel && candidates.size() > 1) {
#pragma omp parallel
    {
      auto local = m.clone();
#pragma omp for schedule(static)
      for (int i = 0; i < static_cast<int>(candidates.size()); ++i)
        values[static_cast<std::size_t>(i)] =
            expected_survey_utility(*local, candidates[static_cast<std::size_t>(i)]);
    }
  } else {
    for (std::size_t i = 0; i < candidates.size(); ++i)
      values[i] = expected_survey_utility(m, candidates[i]);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (values[i] > values[best]) best = i;
  return candidates[best];
}

CountPosterior subsampled_count_posterior(const PosteriorModel& m, double fraction,
                                          int repeats, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw config_error("fraction must lie in (0,1], got " + std::to_string(fraction));
  if (repeats < 1) throw config_error("repeats must be >= 1");
  const auto pool = unlabeled_points(m);
  if (pool.empty()) throw config_error("no unlabeled points to subsample");

  const auto want = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(pool.size())));
  const std::size_t size = std::max<std::size_t>(1, std::min(want, pool.size()));
  // Rescale by the exact pool/sample ratio rather than 1/fraction so the
  // estimator stays unbiased under the ceiling.
  const double scale = static_cast<double>(pool.size()) / static_cast<double>(size);

  double mean_acc = 0.0;
  double var_acc = 0.0;
  std::vector<PointId> sample;
  for (int r = 0; r < repeats; ++r) {
    sample.clear();
    std::sample(pool.begin(), pool.end(), std::back_inserter(sample), size, rng);
    double mean = static_cast<double>(m.labeled_positives());
    double var = 0.0;
    for (PointId x : sample) {
      const double p = m.posterior(x);
      mean += scale * p;
      var += scale * (p * (1.0 - p));
    }
    mean_acc += mean;
    var_acc += var;
  }
  return CountPosterior{mean_acc / repeats, var_acc / repeats};
}

BetaParams beta_moment_match(double m, double v) {
  if (!(m > 0.0 && m < 1.0))
    throw std::domain_error("proportion mean must lie in (0,1), got " + std::to_string(m));
  if (v <= 0.0)
    throw degenerate_moments_error("proportion variance must be positive, got " +
                                   std::to_string(v));
  if (v >= m * (1.0 - m))
    throw infeasible_moments_error("no beta distribution has mean " + std::to_string(m) +
                                   " and variance " + std::to_string(v));
  const double c = m * (1.0 - m) / v - 1.0;
  return BetaParams{m * c, (1.0 - m) * c};
}

double beta_density(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("beta parameters must be positive");
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("beta density requires x in (0,1)");
  const double log_norm = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_norm);
}

SurveyPosterior survey_posterior(const CountPosterior& count, int num_points) {
  if (num_points < 1) throw usage_error("num_points must be >= 1");
  SurveyPosterior out;
  out.count = count;
  const double n = static_cast<double>(num_points);
  out.proportion_mean = count.mean / n;
  out.proportion_variance = count.variance / (n * n);
  out.beta = beta_moment_match(out.proportion_mean, out.proportion_variance);
  return out;
}

}  // namespace actsearch
