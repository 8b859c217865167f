#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <set>

#include "actsearch/clumps.hpp"
#include "actsearch/policy.hpp"
#include "oracles.hpp"

using namespace actsearch;

namespace {

std::shared_ptr<const NeighborIndex> make_index(const std::vector<std::vector<double>>& pts,
                                                int k) {
  return std::make_shared<const NeighborIndex>(build_neighbor_index(pts, k));
}

KnnModel from_instance(const oracles::RandomInstance& inst, double gamma = 0.1) {
  KnnModel m(make_index(inst.points, inst.k), gamma);
  for (int x = 0; x < static_cast<int>(inst.labels.size()); ++x)
    if (inst.labels[static_cast<std::size_t>(x)] >= 0)
      m.condition(x, inst.labels[static_cast<std::size_t>(x)]);
  return m;
}

// Two perfectly correlated points on the left, one independent on the right.
ClumpModel pair_and_singleton(double eps, double delta) {
  return ClumpModel(ClumpSpace{{Clump{2, eps}, Clump{1, delta}}});
}

}  // namespace

TEST_CASE("one-step utility is the posterior") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 4, 10, 3, 3));
    for (PointId x = 0; x < m.num_points(); ++x) {
      if (m.is_labeled(x)) continue;
      CHECK(expected_search_utility(m, x, 1) == m.posterior(x));
    }
  }
}

TEST_CASE("correlated pair vs independent point, two-step arithmetic") {
  auto m = pair_and_singleton(0.3, 0.4);
  const double left = expected_search_utility(m, 0, 2);
  const double right = expected_search_utility(m, 2, 2);
  CHECK(left == doctest::Approx(0.88).epsilon(1e-13));    // 2e + (1-e)d
  CHECK(right == doctest::Approx(0.70).epsilon(1e-13));   // e + d
  CHECK(left - right == doctest::Approx(0.3 * 0.6).epsilon(1e-12));  // e(1-d)

  CHECK(*select_search(m, 1) == 2);  // greedy takes the higher marginal
  CHECK(*select_search(m, 2) == 0);  // two-step switches to the pair

  // The dominance holds for any delta > eps.
  for (double delta : {0.31, 0.5, 0.75, 0.99}) {
    auto s = pair_and_singleton(0.3, delta);
    CHECK(*select_search(s, 2) == 0);
  }
}

TEST_CASE("lookahead matches the brute-force enumeration oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = oracles::random_instance(seed, 4, 8, 3, 2);
    auto m = from_instance(inst);
    if (m.num_unlabeled() == 0) continue;
    const auto knn = oracles::naive_knn(inst.points, inst.k, 0.1);
    std::vector<int> labels(inst.points.size(), -1);
    for (PointId x = 0; x < m.num_points(); ++x)
      if (m.is_labeled(x)) labels[static_cast<std::size_t>(x)] = m.label(x);
    for (int ell = 1; ell <= 3; ++ell) {
      for (PointId x = 0; x < m.num_points(); ++x) {
        if (m.is_labeled(x)) continue;
        const double engine = expected_search_utility(m, x, ell);
        const double oracle = oracles::naive_expectimax(knn, labels, x, ell);
        CHECK(engine == doctest::Approx(oracle).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("lookahead leaves the state untouched and stays within [0, horizon]") {
  for (std::uint64_t seed = 50; seed < 70; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 5, 10, 3, 3));
    if (m.num_unlabeled() == 0) continue;
    const auto fp = m.fingerprint();
    const int depth = m.undo_depth();
    for (int ell = 1; ell <= 3; ++ell) {
      for (PointId x = 0; x < m.num_points(); ++x) {
        if (m.is_labeled(x)) continue;
        const double v = expected_search_utility(m, x, ell);
        CHECK(v >= 0.0);
        CHECK(v <= static_cast<double>(ell));
      }
    }
    CHECK(m.fingerprint() == fp);
    CHECK(m.undo_depth() == depth);
  }
}

TEST_CASE("horizon-1 selection is the posterior argmax") {
  for (std::uint64_t seed = 80; seed < 100; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 4, 12, 4, 4));
    if (m.num_unlabeled() == 0) continue;
    PointId best = -1;
    double best_p = -1.0;
    for (PointId x = 0; x < m.num_points(); ++x) {
      if (m.is_labeled(x)) continue;
      if (m.posterior(x) > best_p) {
        best_p = m.posterior(x);
        best = x;
      }
    }
    CHECK(*select_search(m, 1) == best);
  }
}

TEST_CASE("parallel candidate evaluation matches the serial reference") {
  for (std::uint64_t seed = 120; seed < 132; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 8, 16, 4, 3));
    if (m.num_unlabeled() == 0) continue;
    for (int ell = 2; ell <= 3; ++ell) {
      const auto serial = select_search(m, ell, SelectOptions{false, true, false});
      const auto parallel = select_search(m, ell, SelectOptions{false, true, true});
      CHECK(serial == parallel);
    }
  }
}

TEST_CASE("uncertainty sampling picks the posterior closest to 1/2") {
  ClumpModel a(ClumpSpace{{Clump{1, 0.2}, Clump{1, 0.45}, Clump{1, 0.9}}});
  CHECK(*select_uncertainty(a) == 1);

  ClumpModel b(ClumpSpace{{Clump{1, 0.4}, Clump{1, 0.6}}});
  CHECK(*select_uncertainty(b) == 0);  // equal distance, lowest id

  ClumpModel c(ClumpSpace{{Clump{1, 0.3}, Clump{1, 0.3}, Clump{1, 0.3}}});
  CHECK(*select_uncertainty(c) == 0);
}

TEST_CASE("random baseline: determinism and uniformity") {
  ClumpModel single(ClumpSpace{{Clump{1, 0.5}}});
  Rng rng(1);
  CHECK(*select_random(single, rng) == 0);

  ClumpModel four(ClumpSpace{{Clump{1, 0.5}, Clump{1, 0.5}, Clump{1, 0.5}, Clump{1, 0.5}}});
  Rng r1(42), r2(42);
  for (int i = 0; i < 100; ++i) CHECK(*select_random(four, r1) == *select_random(four, r2));

  Rng r3(7);
  int counts[4] = {0, 0, 0, 0};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[*select_random(four, r3)];
  const double sigma = std::sqrt(0.25 * 0.75 * draws);
  for (int c : counts) CHECK(std::abs(c - draws * 0.25) <= 3.0 * sigma);
}

TEST_CASE("episode bookkeeping on a disks dataset") {
  const Dataset data = generate_disks(60, 5);
  const NeighborIndex index = build_neighbor_index(data.features, 5);
  EpisodeConfig cfg;
  cfg.kind = PolicyKind::search;
  cfg.horizon = 2;
  cfg.budget = 12;
  cfg.seed = 9;
  const auto trace = run_episode(data, index, cfg);

  CHECK(trace.steps.size() == 12u);
  std::set<PointId> seen;
  int cum = 0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    CHECK(s.step == static_cast<int>(i) + 1);
    CHECK(seen.insert(s.point).second);  // no point queried twice
    cum += s.label;
    CHECK(s.cumulative_targets == cum);
    CHECK(s.label == data.labels[static_cast<std::size_t>(s.point)]);
  }
  CHECK(trace.targets_found == cum);

  // Same config, same seed: identical trace.
  const auto again = run_episode(data, index, cfg);
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    CHECK(again.steps[i].point == trace.steps[i].point);
}

TEST_CASE("zero budget without seeding gives an empty trace") {
  const Dataset data = generate_disks(20, 3);
  const NeighborIndex index = build_neighbor_index(data.features, 3);
  EpisodeConfig cfg;
  cfg.budget = 0;
  cfg.seed_target = false;
  const auto trace = run_episode(data, index, cfg);
  CHECK(trace.steps.empty());
  CHECK(trace.targets_found == 0);
}

TEST_CASE("budget above the unlabeled pool is a configuration error") {
  const Dataset data = generate_disks(10, 3);
  const NeighborIndex index = build_neighbor_index(data.features, 3);
  EpisodeConfig cfg;
  cfg.budget = 10;  // pool is 9 after seeding
  CHECK_THROWS_AS(run_episode(data, index, cfg), config_error);
}

TEST_CASE("greedy trace follows statically ordered posteriors") {
  // Five isolated candidates, each with three private labeled hub points.
  // Hubs sit within 0.3 of their candidate, clusters 100 apart, k = 3, so
  // revealing a candidate never changes another candidate's posterior.
  std::vector<std::vector<double>> pts;
  const int hub_labels[5][3] = {
      {1, 1, 1}, {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 0, 0}};
  std::vector<std::pair<PointId, int>> hub_points;
  std::vector<PointId> candidates;
  for (int c = 0; c < 5; ++c) {
    const double base = 100.0 * c;
    candidates.push_back(static_cast<PointId>(pts.size()));
    pts.push_back({base});
    for (int h = 0; h < 3; ++h) {
      hub_points.emplace_back(static_cast<PointId>(pts.size()), hub_labels[c][h]);
      pts.push_back({base + 0.1 * (h + 1)});
    }
  }
  KnnModel m(make_index(pts, 3), 0.1);
  for (const auto& [id, y] : hub_points) m.condition(id, y);

  // Posteriors: 3.1/4, 0.1/4, 1.1/4, 2.1/4, 0.1/4 -> order 0, 3, 2, 1, 4.
  std::vector<PointId> visited;
  while (static_cast<int>(visited.size()) < 5) {
    const auto pick = *select_search(m, 1);
    visited.push_back(pick);
    m.condition(pick, 0);
  }
  CHECK(visited == (std::vector<PointId>{candidates[0], candidates[3], candidates[2],
                                         candidates[1], candidates[4]}));
}

TEST_CASE("with one query left, any horizon behaves like the greedy rule") {
  const Dataset data = generate_disks(40, 13);
  const NeighborIndex index = build_neighbor_index(data.features, 4);
  for (int horizon : {1, 2, 3, 5}) {
    EpisodeConfig cfg;
    cfg.horizon = horizon;
    cfg.budget = 1;
    cfg.seed = 21;
    const auto trace = run_episode(data, index, cfg);
    EpisodeConfig greedy = cfg;
    greedy.horizon = 1;
    const auto ref = run_episode(data, index, greedy);
    CHECK(trace.steps[0].point == ref.steps[0].point);
  }
}
