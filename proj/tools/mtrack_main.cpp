#include "mtrack/bench.hpp"
#include "mtrack/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace mtrack;

namespace {

void print_metric_summary(const SuccessReport& rep) {
  const char* names[5] = {"obstacle (chi1)", "agent (chi2)", "target (chi3)",
                          "los-obstacle (phi1)", "los-agent (phi2)"};
  std::printf("%-20s %s\n", "metric", "min/mean [m]");
  for (int k = 0; k < 5; ++k) {
    std::printf("%-20s %.3f/%.3f\n", names[k], rep.minima[k], rep.means[k]);
  }
}

int run_scenario_file(const std::string& path, const std::string& out_dir, int threads,
                      const std::vector<std::string>& overrides) {
  Scenario sc;
  try {
    sc = load_scenario(path);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("override must be key=value: " + kv);
      }
      apply_override(sc, kv.substr(0, eq), kv.substr(eq + 1));
    }
  } catch (const ScenarioParseError& e) {
    std::cerr << path << ":" << e.line << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  }
  const auto errors = validate_scenario(sc);
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << path << ": " << e << "\n";
    return 1;
  }

  SimOptions opts;
  opts.threads = threads;
  Simulation sim(std::move(sc), opts);
  sim.run();

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "metrics.csv") << [&] {
      std::ostringstream os;
      sim.write_metrics_csv(os);
      return os.str();
    }();
    std::ofstream(fs::path(out_dir) / "planning.csv") << [&] {
      std::ostringstream os;
      sim.write_plan_log_csv(os);
      return os.str();
    }();
    std::ofstream(fs::path(out_dir) / "trajectories.csv") << [&] {
      std::ostringstream os;
      sim.write_trajectory_csv(os);
      return os.str();
    }();
  }

  const SuccessReport rep = sim.success();
  print_metric_summary(rep);
  if (!rep.success) {
    std::printf("tracking FAILED at t=%.3f (%s)\n", rep.t_first_failure,
                failure_kind_name(rep.first_failure));
    return 2;
  }
  std::printf("tracking succeeded (%zu ticks)\n", sim.metrics().size() - 1);
  return 0;
}

int validate_scenario_file(const std::string& path) {
  try {
    const Scenario sc = load_scenario(path);
    const auto errors = validate_scenario(sc);
    if (errors.empty()) {
      std::printf("%s: valid (%zu agents, %zu dynamic obstacles, duration %.1fs)\n", path.c_str(),
                  sc.agents.size(), sc.dynamic_obstacles.size(), sc.duration);
      return 0;
    }
    for (const auto& e : errors) std::cerr << path << ": " << e << "\n";
    return 1;
  } catch (const ScenarioParseError& e) {
    std::cerr << path << ":" << e.line << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  }
}

struct BenchCli {
  std::string mode = "cells";
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 2;
  int samples = 400;
  double duration = 15.0;
  std::vector<std::string> only_cells;
  std::string out_dir;
};

int run_bench_cli(const BenchCli& cli) {
  const BenchMode mode = cli.mode == "cells" ? BenchMode::cells : BenchMode::checks;
  BenchSettings settings;
  settings.trials = cli.trials;
  settings.seed = cli.seed;
  settings.threads = cli.threads;
  settings.sample_count = cli.samples;
  settings.duration = cli.duration;

  auto selected = [&](const std::string& label) {
    if (cli.only_cells.empty()) return true;
    for (const auto& c : cli.only_cells) {
      if (c == label) return true;
    }
    return false;
  };

  std::vector<BenchRow> rows;
  const auto variants = bench_variants(mode);
  if (mode == BenchMode::cells) {
    const auto grid = default_cells_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!selected(grid[i].label)) continue;
      for (const auto& v : variants) {
        rows.push_back(run_cells_bench(grid[i], static_cast<int>(i), v, settings));
      }
    }
  } else {
    const auto grid = default_checks_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!selected(grid[i].label)) continue;
      for (const auto& v : variants) {
        rows.push_back(run_checks_bench(grid[i], static_cast<int>(i), v, settings));
      }
    }
  }

  std::printf("%-12s %-16s %10s %8s %18s\n", "cell", "variant", "success", "rate", "wilson 95%");
  for (const BenchRow& r : rows) {
    std::printf("%-12s %-16s %6d/%-3d %7.1f%% [%5.1f%%, %5.1f%%]\n", r.cell_label.c_str(),
                r.variant.c_str(), r.ci.successes, r.ci.trials, 100.0 * r.ci.rate,
                100.0 * r.ci.lo, 100.0 * r.ci.hi);
  }

  if (!cli.out_dir.empty()) {
    fs::create_directories(cli.out_dir);
    std::ofstream trials_csv(fs::path(cli.out_dir) / "bench_trials.csv");
    trials_csv << "mode,cell,variant,trial,success\n";
    for (const BenchRow& r : rows) {
      for (std::size_t k = 0; k < r.outcomes.size(); ++k) {
        trials_csv << cli.mode << ',' << r.cell_label << ',' << r.variant << ',' << k << ','
                   << int(r.outcomes[k]) << '\n';
      }
    }
    std::ofstream summary_csv(fs::path(cli.out_dir) / "bench_summary.csv");
    summary_csv << "mode,cell,variant,successes,trials,rate,wilson_lo,wilson_hi\n";
    char buf[128];
    for (const BenchRow& r : rows) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", r.ci.rate, r.ci.lo, r.ci.hi);
      summary_csv << cli.mode << ',' << r.cell_label << ',' << r.variant << ','
                  << r.ci.successes << ',' << r.ci.trials << ',' << buf << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed multi-agent target-tracking planner and simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and report metrics");
  std::string scenario_path, out_dir;
  int threads = 2;
  std::vector<std::string> overrides;
  run_cmd->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  run_cmd->add_option("-o,--out", out_dir, "Output directory for CSV logs");
  run_cmd->add_option("--threads", threads, "Primitive-check worker threads");
  run_cmd->add_option("--set", overrides, "Override dotted keys, e.g. planner.sample_count=500");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "Validate a scenario file");
  std::string val_path;
  val_cmd->add_option("scenario", val_path, "Scenario file (JSON)")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo success-rate benchmark");
  BenchCli bench;
  bench_cmd->add_option("--mode", bench.mode, "cells | checks")
      ->check(CLI::IsMember({"cells", "checks"}));
  bench_cmd->add_option("--trials", bench.trials, "Trials per grid cell (default 100)");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--threads", bench.threads, "Parallel trials");
  bench_cmd->add_option("--samples", bench.samples, "Primitive samples per plan");
  bench_cmd->add_option("--duration", bench.duration, "Run length per trial [s]");
  bench_cmd->add_option("--cells", bench.only_cells, "Restrict to given cell labels");
  bench_cmd->add_option("-o,--out", bench.out_dir, "Directory for trial/summary CSVs");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random scenario file");
  std::string gen_kind = "dynamic", gen_out;
  int gen_agents = 3, gen_obstacles = 10;
  double gen_speed = 0.5, gen_duration = 20.0;
  double gen_radius_lo = 0.3, gen_radius_hi = 0.6;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("--kind", gen_kind, "empty | dynamic")
      ->check(CLI::IsMember({"empty", "dynamic"}));
  gen_cmd->add_option("--agents", gen_agents, "Tracker count");
  gen_cmd->add_option("--obstacles", gen_obstacles, "Dynamic obstacle count (dynamic kind)");
  gen_cmd->add_option("--speed", gen_speed, "Target/obstacle speed cap [m/s]");
  gen_cmd->add_option("--duration", gen_duration, "Script duration [s]");
  gen_cmd->add_option("--radius-lo", gen_radius_lo, "Sampling annulus lower bound [m]");
  gen_cmd->add_option("--radius-hi", gen_radius_hi, "Sampling annulus upper bound [m]");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("-o,--out", gen_out, "Output scenario path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_scenario_file(scenario_path, out_dir, threads, overrides);
    if (val_cmd->parsed()) return validate_scenario_file(val_path);
    if (bench_cmd->parsed()) return run_bench_cli(bench);
    if (gen_cmd->parsed()) {
      Scenario sc;
      if (gen_kind == "empty") {
        EmptySpaceParams p;
        p.agents = gen_agents;
        p.sample_radius_lo = gen_radius_lo;
        p.sample_radius_hi = gen_radius_hi;
        p.target_speed = gen_speed;
        p.duration = gen_duration;
        sc = random_empty_space_scenario(p, gen_seed);
      } else {
        DynamicWorldParams p;
        p.agents = gen_agents;
        p.obstacles = gen_obstacles;
        p.speed = gen_speed;
        p.duration = gen_duration;
        p.sample_radius_lo = gen_radius_lo;
        p.sample_radius_hi = gen_radius_hi;
        sc = random_dynamic_scenario(p, gen_seed);
      }
      std::ofstream(gen_out) << scenario_to_json(sc);
      std::printf("wrote %s\n", gen_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
