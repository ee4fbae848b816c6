// Command-line front end for the spatial cache-placement toolkit.
//
// Verbs: table2, sweep, utilization, radii, simulate.
// Exit codes: 0 success, 2 configuration/CLI error, 3 solver error,
//             4 reference-table mismatch (table2 only).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "d2dcache/analytic.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/experiment.hpp"
#include "d2dcache/optimize.hpp"
#include "d2dcache/scenario.hpp"
#include "d2dcache/simulate.hpp"

namespace {

void emit(const d2dcache::Table& table, const std::string& out_path) {
  if (out_path.empty()) {
    d2dcache::write_csv(std::cout, table);
  } else {
    d2dcache::write_csv(out_path, table);
    std::cerr << "wrote " << table.rows.size() << " rows to " << out_path
              << "\n";
  }
}

struct CommonArgs {
  std::string scenario_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t replications = 2000;
  std::string strategies = "mpc,gcp,mhc-a,mhc-b";
  bool full_cache_blocks = false;
  bool no_capacity = false;
  int threads = 0;
};

d2dcache::ExperimentSpec build_spec(const CommonArgs& args) {
  d2dcache::ExperimentSpec spec;
  spec.config = d2dcache::load_scenario(args.scenario_path);
  spec.seed = args.seed_given ? args.seed : spec.config.seed;
  spec.replications = args.replications;
  spec.strategies = d2dcache::parse_strategies(args.strategies);
  spec.sim.enforce_capacity = !args.no_capacity;
  spec.sim.full_cache_blocks = args.full_cache_blocks;
  spec.sim.threads = args.threads;
  return spec;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_scenario) {
  if (needs_scenario) {
    cmd->add_option("--scenario", args.scenario_path, "scenario file")
        ->required();
  }
  cmd->add_option("--out", args.out_path, "output CSV path (default stdout)");
  cmd->add_option("--seed", args.seed, "root seed (default: scenario seed)")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--replications", args.replications,
                  "Monte-Carlo replications");
  cmd->add_option("--strategies", args.strategies,
                  "comma list from {mpc,gcp,mhc-a,mhc-b}");
  cmd->add_flag("--full-cache-blocks", args.full_cache_blocks,
                "full caches keep suppressing neighbors (alternate capacity "
                "reading)");
  cmd->add_flag("--no-capacity", args.no_capacity,
                "disable the cache-capacity constraint in simulation");
  cmd->add_option("--threads", args.threads,
                  "worker threads (0 = hardware)");
}

int run(int argc, char** argv) {
  CLI::App app{"Spatial content-placement strategies for cache networks: "
               "solvers, bounds, and Monte-Carlo validation"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* table2 = app.add_subcommand(
      "table2", "reproduce the seven-row reference table");
  std::string table2_out;
  table2->add_option("--out", table2_out, "output CSV path (default stdout)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "hit probability vs a swept parameter, analytic + MC");
  std::string sweep_param;
  std::vector<double> sweep_values;
  add_common(sweep, args, true);
  sweep->add_option("--param", sweep_param,
                    "intensity | d2d_radius | cache_size")
      ->required();
  sweep->add_option("--values", sweep_values, "sweep values")
      ->required()
      ->delimiter(',');

  CLI::App* utilization = app.add_subcommand(
      "utilization", "cache slot-occupancy ratio vs radius per intensity");
  std::vector<double> util_intensities;
  std::vector<double> util_radii;
  add_common(utilization, args, true);
  utilization
      ->add_option("--intensities", util_intensities, "intensity values")
      ->required()
      ->delimiter(',');
  utilization
      ->add_option("--radii", util_radii,
                   "d2d radius values (default: scenario radius)")
      ->delimiter(',');

  CLI::App* radii = app.add_subcommand(
      "radii", "per-file exclusion radius profile vs cache size");
  std::vector<int> cache_sizes;
  add_common(radii, args, true);
  radii->add_option("--cache-sizes", cache_sizes, "cache sizes to profile")
      ->required()
      ->delimiter(',');

  CLI::App* simulate = app.add_subcommand(
      "simulate", "single-configuration Monte-Carlo run with bounds");
  std::string sim_strategy = "mhc-a";
  std::string dump_path;
  add_common(simulate, args, true);
  simulate->add_option("--strategy", sim_strategy,
                       "one of mpc, gcp, mhc-a, mhc-b");
  simulate->add_option("--dump", dump_path,
                       "write one sampled realization (x,y,files) here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help text or the parse error
    return code == 0 ? 0 : 2;
  }

  if (table2->parsed()) {
    const d2dcache::Table2Result result = d2dcache::run_table2();
    emit(result.table, table2_out);
    for (const std::string& line : result.mismatches) {
      std::cerr << "mismatch: " << line << "\n";
    }
    if (!result.all_pass) {
      std::cerr << "table2: " << result.mismatches.size()
                << " cells outside 1e-3 tolerance\n";
      return 4;
    }
    std::cerr << "table2: all cells within 1e-3\n";
    return 0;
  }

  if (sweep->parsed()) {
    const d2dcache::ExperimentSpec spec = build_spec(args);
    emit(d2dcache::run_sweep(spec, sweep_param, sweep_values), args.out_path);
    return 0;
  }

  if (utilization->parsed()) {
    const d2dcache::ExperimentSpec spec = build_spec(args);
    if (util_radii.empty()) util_radii = {spec.config.d2d_radius};
    emit(d2dcache::run_utilization(spec, util_intensities, util_radii),
         args.out_path);
    return 0;
  }

  if (radii->parsed()) {
    const d2dcache::ExperimentSpec spec = build_spec(args);
    emit(d2dcache::run_radii_profile(spec, cache_sizes), args.out_path);
    return 0;
  }

  if (simulate->parsed()) {
    d2dcache::ExperimentSpec spec = build_spec(args);
    spec.strategies = d2dcache::parse_strategies(sim_strategy);
    const d2dcache::PolicyKind kind = spec.strategies.front();
    const d2dcache::PopularityModel popularity = d2dcache::zipf_pmf(
        spec.config.catalog_size, spec.config.zipf_exponent);
    const d2dcache::detail::StrategyPlan plan =
        d2dcache::detail::plan_strategy(spec.config, popularity, kind);
    const d2dcache::HitEstimate mc =
        d2dcache::estimate_hit(spec.config, popularity, plan.policy,
                               spec.replications, spec.seed, spec.sim);
    d2dcache::Table table;
    table.columns = {"strategy",     "analytic_lower", "analytic_upper",
                     "mc_mean",      "mc_std_error",   "replications"};
    table.rows.push_back({d2dcache::to_string(kind),
                          d2dcache::format_value(plan.bounds.lower),
                          d2dcache::format_value(plan.bounds.upper),
                          d2dcache::format_value(mc.mean),
                          d2dcache::format_value(mc.std_error),
                          std::to_string(spec.replications)});
    emit(table, args.out_path);
    if (!dump_path.empty()) {
      std::ofstream dump(dump_path);
      if (!dump) {
        throw d2dcache::config_error("cannot open dump path " + dump_path);
      }
      d2dcache::RngFactory factory{spec.seed};
      auto pattern_rng = factory.stream(0, 0);
      const d2dcache::PointPattern pattern = d2dcache::sample_ppp(
          spec.config, pattern_rng,
          d2dcache::detail::placement_buffer(plan.policy));
      auto placement_rng = factory.stream(0, 1);
      const d2dcache::PointPattern placed = d2dcache::detail::place_policy(
          spec.config, pattern, plan.policy, popularity, placement_rng,
          spec.sim);
      d2dcache::dump_realization(dump, placed);
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const d2dcache::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const d2dcache::solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
