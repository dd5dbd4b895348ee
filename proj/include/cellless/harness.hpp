#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cellless/radio_metrics.hpp"
#include "cellless/scenario.hpp"
#include "cellless/solution.hpp"
#include "cellless/solver_ctm.hpp"
#include "cellless/solver_maxrate.hpp"

namespace cellless {

enum class SolverChoice { Ctm, MaxRate, Both };

SolverChoice solver_choice_from_string(std::string_view s);

struct ExperimentSpec {
  std::string scenario;  // built-in name or path to a scenario file
  SolverChoice solver = SolverChoice::Both;
  std::vector<std::uint64_t> seeds;
  int n_realizations = 10;  // MaxRate evaluations; CtM uses ctm.realizations_per_check
  unsigned workers = 1;
  std::optional<std::filesystem::path> out_dir;  // nothing is written when empty
  CtmConfig ctm;
  AnnealConfig anneal;
  bool dump_links = false;
};

struct RunRecord {
  std::string scenario_name;
  std::uint64_t seed = 0;
  std::string solver;  // "ctm" or "maxrate"
  double wall_time_s = 0.0;
  bool ok = false;
  std::string error;  // set when the solver threw
  bool no_feasible = false;
  std::shared_ptr<const Scenario> scenario;  // the instance the run used
  SolutionState solution;
  MetricsBundle metrics;
};

/// Scenario instance for one seed: built-ins and files with a placement
/// section but no entities are populated from the seed.
Scenario scenario_instance(const std::string& name_or_path, std::uint64_t seed);

/// Runs every (seed, solver) pair. Both solvers of a seed share the
/// scenario instance and the channel seed. Records come back ordered by
/// seed, then ctm before maxrate, regardless of the worker count. When
/// `out_dir` is set, writes per-run files, aggregate.csv and timing.csv.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

/// Parses a seed list such as "1..10", "3" or "1,4,7".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Median and 10th/90th percentiles (linear interpolation) per scenario and
/// solver over successful runs.
std::string aggregate_csv(const std::vector<RunRecord>& records);

double percentile(std::vector<double> values, double q);

/// Reads back every run written under `dir`.
std::vector<RunRecord> load_records(const std::filesystem::path& dir);

/// Kinds: power-bars, rate-cdf, sar-cdf, rate-map, sar-map.
std::string plot_data(const std::vector<RunRecord>& records, const std::string& kind);
void emit_plot_data(const std::vector<RunRecord>& records, const std::string& kind,
                    const std::filesystem::path& out);

}  // namespace cellless
