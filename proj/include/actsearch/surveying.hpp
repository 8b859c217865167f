#pragma once

#include <optional>

#include "actsearch/model.hpp"
#include "actsearch/rng.hpp"

namespace actsearch {

struct CountPosterior {
  double mean = 0.0;      // E[card R | D]
  double variance = 0.0;  // var[card R | D]
};

// Moments of the target count under the conditional-independence convention:
// unlabeled labels are independent Bernoulli(p_i) given the data, so
// mean = observed targets + sum p_i and variance = sum p_i (1 - p_i).
// The model contract only defines marginals; this is the minimal joint that
// makes the variance well-defined.
CountPosterior count_posterior(const PosteriorModel& m);

// E_y[-var[card R | D + (x, y)]]: the one-step surveying objective. State
// restored on return.
double expected_survey_utility(PosteriorModel& m, PointId x);

// Point with the smallest expected posterior count variance; lowest id on
// ties. Empty when the domain is exhausted.
std::optional<PointId> select_survey(PosteriorModel& m, bool parallel = false);

// Estimates count_posterior from `repeats` uniform subsamples of the
// unlabeled pool (ceil(fraction * unlabeled) points each), rescaling each
// subsample sum to the full pool and averaging. fraction = 1 reproduces
// count_posterior exactly.
CountPosterior subsampled_count_posterior(const PosteriorModel& m, double fraction,
                                          int repeats, Rng& rng);

struct BetaParams {
  double a = 0.0;
  double b = 0.0;
};

// Beta parameters with mean m and variance v exactly. Throws
// degenerate_moments_error when v <= 0 and infeasible_moments_error when
// v >= m(1-m); infeasibility is never clamped silently.
BetaParams beta_moment_match(double m, double v);

// Beta density at x in (0,1), computed in log space.
double beta_density(double a, double b, double x);

// Count moments plus the derived class-proportion summary.
struct SurveyPosterior {
  CountPosterior count;
  double proportion_mean = 0.0;
  double proportion_variance = 0.0;
  BetaParams beta;
};

SurveyPosterior survey_posterior(const CountPosterior& count, int num_points);

}  // namespace actsearch
