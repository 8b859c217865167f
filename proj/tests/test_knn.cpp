#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <set>

#include "actsearch/knn_model.hpp"
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

void recount_check(const KnnModel& m) {
  const auto& idx = m.index();
  for (PointId x = 0; x < m.num_points(); ++x) {
    int alpha = 0;
    int beta = 0;
    for (PointId nb : idx.forward[static_cast<std::size_t>(x)]) {
      if (!m.is_labeled(nb)) continue;
      ++beta;
      alpha += m.label(nb);
    }
    CHECK(m.alpha(x) == alpha);
    CHECK(m.beta(x) == beta);
  }
}

}  // namespace

TEST_CASE("neighbor index on a 3-point line") {
  const auto idx = build_neighbor_index({{0.0}, {1.0}, {3.0}}, 1);
  CHECK(idx.forward[0] == std::vector<PointId>{1});
  CHECK(idx.forward[1] == std::vector<PointId>{0});
  CHECK(idx.forward[2] == std::vector<PointId>{1});
  CHECK(idx.reverse[0] == std::vector<PointId>{1});
  CHECK(idx.reverse[1] == (std::vector<PointId>{0, 2}));
  CHECK(idx.reverse[2].empty());
}

TEST_CASE("degenerate k is a configuration error") {
  const std::vector<std::vector<double>> pts{{0.0}, {1.0}, {2.0}};
  CHECK_THROWS_AS(build_neighbor_index(pts, 3), config_error);
  CHECK_THROWS_AS(build_neighbor_index(pts, 0), config_error);
  CHECK_THROWS_AS(build_neighbor_index({{0.0}, {std::nan("")}}, 1), config_error);
}

TEST_CASE("reverse index is the exact transpose; sizes sum to N*k") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 250; ++i) pts.push_back({coord(rng), coord(rng)});
  const auto idx = build_neighbor_index(pts, 50);

  std::size_t total = 0;
  for (const auto& rev : idx.reverse) total += rev.size();
  CHECK(total == 250u * 50u);

  std::set<std::pair<PointId, PointId>> fwd_edges, rev_edges;
  for (PointId x = 0; x < idx.num_points(); ++x) {
    CHECK(idx.forward[static_cast<std::size_t>(x)].size() == 50u);
    for (PointId nb : idx.forward[static_cast<std::size_t>(x)]) {
      CHECK(nb != x);
      fwd_edges.emplace(x, nb);
    }
    for (PointId src : idx.reverse[static_cast<std::size_t>(x)]) rev_edges.emplace(src, x);
  }
  CHECK(fwd_edges == rev_edges);

  // Parallel construction is bit-identical.
  const auto par = build_neighbor_index(pts, 50, true);
  CHECK(par.forward == idx.forward);
  CHECK(par.reverse == idx.reverse);
}

TEST_CASE("posterior values") {
  // 0 and 1 are mutual nearest neighbors; 2's neighbor is 1.
  KnnModel m(make_index({{0.0}, {1.0}, {10.0}}, 1), 0.1);
  CHECK(m.posterior(0) == doctest::Approx(0.1).epsilon(1e-15));  // alpha=0, beta=0

  m.condition(1, 1);
  CHECK(m.posterior(0) == doctest::Approx(0.55).epsilon(1e-15));  // alpha=1, beta=1
  CHECK_THROWS_AS(m.posterior(1), usage_error);

  // alpha=1, beta=2 after one positive and one negative neighbor.
  KnnModel m2(make_index({{0.0}, {1.0}, {2.0}}, 2), 0.1);
  m2.condition(1, 1);
  m2.condition(2, 0);
  CHECK(m2.posterior(0) == doctest::Approx(1.1 / 3.0).epsilon(1e-15));
}

TEST_CASE("condition updates through the reverse index; undo restores exactly") {
  KnnModel m(make_index({{0.0}, {1.0}, {10.0}}, 1), 0.1);
  const KnnModel before = m;
  const auto fp = m.fingerprint();

  const double pa = m.posterior(0);
  m.condition(1, 0);
  CHECK(m.posterior(0) < pa);  // (g+a)/(2+b) < (g+a)/(1+b)
  m.undo_last();
  CHECK(m == before);
  CHECK(m.fingerprint() == fp);

  m.condition(1, 1);
  CHECK(m.posterior(0) == doctest::Approx(0.55).epsilon(1e-15));
  CHECK_THROWS_AS(m.condition(1, 0), usage_error);
  m.undo_last();
  CHECK(m == before);
  CHECK_THROWS_AS(m.undo_last(), usage_error);
}

TEST_CASE("posterior upper bound") {
  // Center point 0 with three labeled unit-distance neighbors (1,1,0) and a
  // far labeled point; only 0 stays unlabeled.
  KnnModel m(make_index({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {50.0, 0.0}}, 3), 0.1);
  m.condition(1, 1);
  m.condition(2, 1);
  m.condition(3, 0);
  m.condition(4, 0);
  CHECK(m.alpha(0) == 2);
  CHECK(m.beta(0) == 3);
  CHECK(m.posterior_upper_bound(0) == m.posterior(0));
  CHECK(m.posterior_upper_bound(2) == doctest::Approx(4.1 / 6.0).epsilon(1e-15));

  m.condition(0, 1);
  CHECK_THROWS_AS(m.posterior_upper_bound(0), usage_error);
}

TEST_CASE("bound upper-bounds every reachable posterior (exhaustive, n <= 3)") {
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = oracles::random_instance(seed, 4, 8, 3, 3);
    const auto m = from_instance(inst);
    if (m.num_unlabeled() == 0) continue;
    const auto knn = oracles::naive_knn(inst.points, inst.k, 0.1);
    std::vector<int> labels(inst.points.size(), -1);
    for (PointId x = 0; x < m.num_points(); ++x)
      if (m.is_labeled(x)) labels[static_cast<std::size_t>(x)] = m.label(x);
    for (int n = 0; n <= 3; ++n) {
      const double bound = m.posterior_upper_bound(n);
      const double sup = oracles::enumerate_max_posterior(knn, labels, n);
      CHECK(bound >= sup);
      ++cases;
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("bound is non-decreasing in n") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 4, 12, 4, 5));
    if (m.num_unlabeled() == 0) continue;
    for (int n = 0; n < 5; ++n)
      CHECK(m.posterior_upper_bound(n + 1) >= m.posterior_upper_bound(n));
  }
}

TEST_CASE("nontarget conditioning never raises an unlabeled posterior") {
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 5, 12, 4, 2));
    std::mt19937_64 rng(seed ^ 0xabcdULL);
    while (m.num_unlabeled() > 1) {
      std::vector<double> before(static_cast<std::size_t>(m.num_points()), -1.0);
      for (PointId x = 0; x < m.num_points(); ++x)
        if (!m.is_labeled(x)) before[static_cast<std::size_t>(x)] = m.posterior(x);
      const auto pool = unlabeled_points(m);
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      m.condition(pool[pick(rng)], 0);
      for (PointId x = 0; x < m.num_points(); ++x)
        if (!m.is_labeled(x)) CHECK(m.posterior(x) <= before[static_cast<std::size_t>(x)]);
    }
  }
}

TEST_CASE("condition/undo round trips and recount consistency on random walks") {
  for (std::uint64_t seed = 300; seed < 400; ++seed) {
    auto m = from_instance(oracles::random_instance(seed, 5, 14, 4, 3));
    const KnnModel before = m;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    int depth = 0;
    for (int op = 0; op < 40; ++op) {
      if (depth > 0 && (m.num_unlabeled() == 0 || coin(rng))) {
        m.undo_last();
        --depth;
      } else if (m.num_unlabeled() > 0) {
        const auto pool = unlabeled_points(m);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        m.condition(pool[pick(rng)], coin(rng));
        ++depth;
      }
      recount_check(m);
    }
    while (depth-- > 0) m.undo_last();
    CHECK(m == before);
  }
}
