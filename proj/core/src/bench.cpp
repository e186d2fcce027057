#include "mtrack/bench.hpp"

#include "mtrack/parallel.hpp"
#include "mtrack/rng.hpp"
#include "mtrack/sim.hpp"

#include <cmath>

namespace mtrack {

WilsonInterval wilson_interval(int successes, int trials, double z) {
  WilsonInterval w{0.0, 0.0, 1.0, successes, trials};
  if (trials <= 0) return w;
  const double n = trials;
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.rate = p;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

bool wilson_intervals_disjoint(const WilsonInterval& high, const WilsonInterval& low) {
  return high.lo > low.hi;
}

std::vector<BenchVariant> bench_variants(BenchMode mode) {
  if (mode == BenchMode::cells) {
    return {{"no_cells", CellMode::no_cells, VisibilityMode::relaxed},
            {"static_cells", CellMode::static_cells, VisibilityMode::relaxed},
            {"dynamic_cells", CellMode::dynamic_cells, VisibilityMode::relaxed}};
  }
  return {{"noncooperative", CellMode::no_cells, VisibilityMode::conservative},
          {"conservative", CellMode::dynamic_cells, VisibilityMode::conservative},
          {"proposed", CellMode::dynamic_cells, VisibilityMode::relaxed}};
}

std::vector<CellsBenchCell> default_cells_grid() {
  std::vector<CellsBenchCell> grid;
  const std::pair<double, double> annuli[] = {{0.4, 1.2}, {0.8, 1.6}, {1.2, 2.0}};
  const char* names[] = {"short", "medium", "long"};
  for (int a = 0; a < 3; ++a) {
    for (int n : {3, 4, 5}) {
      grid.push_back({n, annuli[a].first, annuli[a].second,
                      std::string(names[a]) + "_n" + std::to_string(n)});
    }
  }
  return grid;
}

std::vector<ChecksBenchCell> default_checks_grid() {
  std::vector<ChecksBenchCell> grid;
  for (int n : {2, 3, 4}) {
    for (int o : {5, 10, 20}) {
      grid.push_back({n, o, "n" + std::to_string(n) + "_o" + std::to_string(o)});
    }
  }
  return grid;
}

namespace {

template <class MakeScenario>
BenchRow run_bench(const std::string& cell_label, int cell_index, const BenchVariant& variant,
                   const BenchSettings& settings, MakeScenario make_scenario) {
  BenchRow row;
  row.cell_label = cell_label;
  row.variant = variant.name;
  row.outcomes.assign(settings.trials, 0);
  parallel_chunks(settings.trials, settings.threads, [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const std::uint64_t trial_seed = derive_seed(settings.seed, cell_index, k);
      Scenario sc = make_scenario(trial_seed);
      sc.planner.sample_count = settings.sample_count;
      sc.planner.cell_mode = variant.cell_mode;
      sc.planner.visibility_mode = variant.visibility_mode;
      SimOptions opts;
      opts.threads = 1;  // trials are the unit of parallelism
      opts.record_trajectories = false;
      opts.stop_on_failure = settings.stop_on_failure;
      Simulation sim(std::move(sc), opts);
      sim.run();
      row.outcomes[k] = sim.success().success ? 1 : 0;
    }
  });
  int successes = 0;
  for (auto o : row.outcomes) successes += o;
  row.ci = wilson_interval(successes, settings.trials);
  return row;
}

}  // namespace

BenchRow run_cells_bench(const CellsBenchCell& cell, int cell_index, const BenchVariant& variant,
                         const BenchSettings& settings) {
  return run_bench(cell.label, cell_index, variant, settings, [&](std::uint64_t trial_seed) {
    EmptySpaceParams params;
    params.agents = cell.agents;
    params.sample_radius_lo = cell.sample_radius_lo;
    params.sample_radius_hi = cell.sample_radius_hi;
    params.duration = settings.duration;
    return random_empty_space_scenario(params, trial_seed);
  });
}

BenchRow run_checks_bench(const ChecksBenchCell& cell, int cell_index, const BenchVariant& variant,
                          const BenchSettings& settings) {
  return run_bench(cell.label, 1000 + cell_index, variant, settings,
                   [&](std::uint64_t trial_seed) {
                     DynamicWorldParams params;
                     params.agents = cell.agents;
                     params.obstacles = cell.obstacles;
                     params.duration = settings.duration;
                     return random_dynamic_scenario(params, trial_seed);
                   });
}

}  // namespace mtrack
