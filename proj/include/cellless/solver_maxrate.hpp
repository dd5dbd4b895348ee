#pragma once

#include <cstdint>
#include <vector>

#include "cellless/radio_metrics.hpp"
#include "cellless/random.hpp"
#include "cellless/scenario.hpp"
#include "cellless/solution.hpp"

namespace cellless {

struct AnnealConfig {
  double initial_temp = 0.0;  // bit/s; <= 0 calibrates from probe moves
  double cooling_factor = 0.95;
  int iterations = 200;       // temperature steps
  int moves_per_temp = 20;
  double power_step_db = 1.0;
  double angle_step = deg_to_rad(5.0);
  double width_step = deg_to_rad(5.0);
  double reassign_weight = 1.0;  // relative to 1 for each of power/angle/width
  int calibration_probes = 100;
  double calibration_acceptance = 0.8;
  int parallel_candidates = 1;
  int n_realizations = 10;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Minimum mean user rate; -inf when some user is unserved.
double objective(const MetricsBundle& metrics);
double objective(const SolutionState& solution, const Scenario& scenario, std::uint64_t seed,
                 int n_realizations = 10);

/// One random mutation: a PoA power (+-step, capped at max), a beam's
/// azimuth (wrapped) or zenith (clamped to [0, pi]), a beam's width
/// (clamped to [min width, pi]), or moving one user to another beam.
SolutionState neighbor(const SolutionState& solution, const Scenario& scenario,
                       const AnnealConfig& config, RandomStream& rng);

struct MaxRateResult {
  SolutionState solution;
  MetricsBundle metrics;
  double initial_temp = 0.0;
  std::vector<double> best_history;  // best objective after each temperature step
  long late_worse_proposed = 0;      // strictly worse proposals in the last 10% of moves
  long late_worse_accepted = 0;
  long evaluations = 0;
};

/// Initial state: CtM clustering and steering with every PoA at max power.
SolutionState maxrate_initial_state(const Scenario& scenario, std::uint64_t seed);

MaxRateResult solve_maxrate(const Scenario& scenario, const AnnealConfig& config);

}  // namespace cellless
