// Compares the serial reference paths against their OpenMP counterparts on a
// synthetic dataset: neighbor-index construction, unpruned lookahead
// selection, and survey selection. The parallel paths must return identical
// results; timings are printed as a table.

#include <chrono>
#include <cstdio>
#include <memory>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "actsearch/harness.hpp"
#include "actsearch/surveying.hpp"

using namespace actsearch;

namespace {

double time_seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s %10.4fs %10.4fs %7.2fx  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int n = 1500;
  int k = 10;
  int horizon = 2;
  std::uint64_t seed = 7;
  CLI::App app{"serial vs OpenMP kernel comparison"};
  app.add_option("--n", n, "points in the synthetic dataset");
  app.add_option("--k", k, "neighbor count");
  app.add_option("--lookahead", horizon, "selection horizon");
  app.add_option("--seed", seed, "dataset seed");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("%-28s %11s %11s %8s\n", "kernel", "serial", "parallel", "speedup");

  const Dataset data = generate_disks(n, seed);
  bool all_same = true;

  NeighborIndex serial_index, parallel_index;
  const double t_idx_s =
      time_seconds([&] { serial_index = build_neighbor_index(data.features, k, false); });
  const double t_idx_p =
      time_seconds([&] { parallel_index = build_neighbor_index(data.features, k, true); });
  const bool idx_same = serial_index.forward == parallel_index.forward &&
                        serial_index.reverse == parallel_index.reverse;
  all_same &= idx_same;
  report("build_neighbor_index", t_idx_s, t_idx_p, idx_same);

  const auto shared = std::make_shared<const NeighborIndex>(serial_index);
  KnnModel model(shared, 0.1);
  PointId first_target = -1;
  for (PointId x = 0; x < data.num_points(); ++x)
    if (data.labels[static_cast<std::size_t>(x)] == 1) {
      first_target = x;
      break;
    }
  if (first_target >= 0) model.condition(first_target, 1);

  std::optional<PointId> pick_s, pick_p;
  const double t_sel_s = time_seconds(
      [&] { pick_s = select_search(model, horizon, SelectOptions{false, true, false}); });
  const double t_sel_p = time_seconds(
      [&] { pick_p = select_search(model, horizon, SelectOptions{false, true, true}); });
  all_same &= pick_s == pick_p;
  report("select_search (unpruned)", t_sel_s, t_sel_p, pick_s == pick_p);

  std::optional<PointId> survey_s, survey_p;
  const double t_sur_s = time_seconds([&] { survey_s = select_survey(model, false); });
  const double t_sur_p = time_seconds([&] { survey_p = select_survey(model, true); });
  all_same &= survey_s == survey_p;
  report("select_survey", t_sur_s, t_sur_p, survey_s == survey_p);

  return all_same ? 0 : 1;
}
