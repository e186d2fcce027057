#pragma once

#include "mtrack/scenario.hpp"

#include <string>
#include <vector>

namespace mtrack {

struct WilsonInterval {
  double rate;
  double lo;
  double hi;
  int successes;
  int trials;
};

/// 95% (by default) Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(int successes, int trials, double z = 1.959963984540054);

bool wilson_intervals_disjoint(const WilsonInterval& high, const WilsonInterval& low);

enum class BenchMode { cells, checks };

/// Grid cell of the cell-ablation study: tracker count x sampling annulus,
/// in an obstacle-free space.
struct CellsBenchCell {
  int agents;
  double sample_radius_lo;
  double sample_radius_hi;
  std::string label;
};

/// Grid cell of the check-comparison study: tracker count x obstacle count,
/// in a dynamic-obstacle world.
struct ChecksBenchCell {
  int agents;
  int obstacles;
  std::string label;
};

/// Planner variants under test. cells mode: none/static/dynamic cells, all
/// with the relaxed check. checks mode: noncooperative (no cells,
/// conservative check), conservative (cells, conservative check), proposed
/// (cells, relaxed check).
struct BenchVariant {
  std::string name;
  CellMode cell_mode;
  VisibilityMode visibility_mode;
};
std::vector<BenchVariant> bench_variants(BenchMode mode);

/// Default grids mirroring the two study tables.
std::vector<CellsBenchCell> default_cells_grid();
std::vector<ChecksBenchCell> default_checks_grid();

struct BenchSettings {
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  int sample_count = 400;   // per-plan primitive budget during benchmarks
  double duration = 15.0;   // desk-scale run length [s]
  bool stop_on_failure = true;
};

struct BenchRow {
  std::string cell_label;
  std::string variant;
  WilsonInterval ci;
  std::vector<std::uint8_t> outcomes;  // per-trial success flags, trial order
};

/// Monte Carlo over one grid cell and one variant. Trial k runs the scenario
/// generated from seed derive(seed, cell_index, k); the same worlds are
/// reused across variants so comparisons are paired.
BenchRow run_cells_bench(const CellsBenchCell& cell, int cell_index, const BenchVariant& variant,
                         const BenchSettings& settings);
BenchRow run_checks_bench(const ChecksBenchCell& cell, int cell_index, const BenchVariant& variant,
                          const BenchSettings& settings);

}  // namespace mtrack
