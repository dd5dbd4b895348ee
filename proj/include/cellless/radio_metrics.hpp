#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cellless/channel.hpp"
#include "cellless/scenario.hpp"
#include "cellless/solution.hpp"

namespace cellless {

inline constexpr double kNoiseDensityDbmPerHz = -174.0;

/// Thermal noise N0 W in watts.
double noise_power_w(double bandwidth_hz);

double sinr(double signal_w, double noise_w, double interference_w);

/// W log2(1 + SINR).
double shannon_rate(double bandwidth_hz, double sinr);

/// S = P_rx / (lambda^2 / 4 pi) = 4 pi f^2 / c^2 * P_rx, W/m^2.
double power_density(double frequency_hz, double p_rx_w);

/// Outputs of one evaluation: rates and SAR are means over realizations.
struct MetricsBundle {
  std::vector<int> user_ids;
  std::vector<double> user_rate_bps;
  std::vector<double> user_sinr;            // mean linear SINR
  std::vector<double> user_interference_w;  // mean interference energy
  std::vector<int> user_serving_poa;
  std::vector<int> human_ids;
  std::vector<std::map<double, double>> human_power_density;  // frequency -> W/m^2
  std::vector<double> human_sar_wkg;
  std::map<int, double> poa_power_dbm;  // effective: -inf when off
  double total_power_w = 0.0;
  bool feasible = false;
  std::vector<std::string> violated;

  double min_rate() const;
  double max_sar() const;
};

struct EvaluationConfig {
  std::uint64_t seed = 0;
  int n_realizations = 10;
  unsigned workers = 1;
};

/// Per-cluster amplitudes (0 dBm reference) of one beam toward every
/// target in every realization.
struct BeamField {
  int beam_id = 0;
  double azimuth = 0.0;
  double zenith = 0.0;
  double width = 0.0;
  std::vector<std::complex<double>> taps;  // [realization][target][cluster]
};

/// Beam fields indexed like Scenario::all_beams(); null for beams that
/// have not been computed. Entries are immutable and shared, so copying a
/// table is cheap.
struct FieldTable {
  std::vector<std::shared_ptr<const BeamField>> beams;
};

/// Per-realization breakdown, for inspection and tests.
struct RealizationDetail {
  std::vector<double> user_signal_w;
  std::vector<double> user_interference_w;
  std::vector<double> user_noise_w;
  std::vector<double> user_sinr;
  std::vector<std::map<double, double>> human_received_power_w;  // frequency -> W
};

/// Evaluates decision vectors against a fixed set of channel realizations.
/// Link draws come from streams keyed by (seed, realization, PoA, target),
/// so results depend only on (scenario, solution, seed, n_realizations).
/// All const members are safe to call concurrently.
class Evaluator {
 public:
  Evaluator(const Scenario& scenario, EvaluationConfig config);

  const Scenario& scenario() const noexcept { return *scenario_; }
  const EvaluationConfig& config() const noexcept { return config_; }

  /// Computes fields for the active beams of `solution`, reusing entries
  /// of `reuse` whose beam geometry is unchanged.
  FieldTable fields(const SolutionState& solution, const FieldTable* reuse = nullptr) const;

  MetricsBundle metrics(const SolutionState& solution, const FieldTable& table) const;

  MetricsBundle evaluate(const SolutionState& solution) const {
    return metrics(solution, fields(solution));
  }

  RealizationDetail realization_detail(const SolutionState& solution, const FieldTable& table,
                                       int realization) const;

  int n_targets() const noexcept { return n_targets_; }
  /// Target index of a user / human (linked humans share their user's link).
  int user_target(std::size_t user_index) const { return static_cast<int>(user_index); }
  int human_target(std::size_t human_index) const { return human_target_[human_index]; }

  /// Regenerates the link PoA -> target for a realization.
  LinkRealization link(int realization, std::size_t poa_index, int target) const;

 private:
  struct Prepared;
  Prepared prepare(const SolutionState& solution, const FieldTable& table) const;
  void realization_pass(const Prepared& prep, int r, RealizationDetail& out) const;

  const Scenario* scenario_;
  EvaluationConfig config_;
  int n_targets_ = 0;
  int n_clusters_ = 0;
  std::vector<int> human_target_;
  std::vector<std::uint64_t> target_key_;
  std::vector<Position3D> target_position_;
  std::vector<int> beam_ids_;
  std::vector<std::size_t> beam_poa_index_;
  std::vector<int> poa_group_;
  std::vector<double> group_frequency_;
  std::vector<std::uint32_t> bins_;    // [r][t][poa][cluster]
  std::vector<std::uint32_t> n_bins_;  // [r][t]
  // Prepared realizations kept in memory when they fit the budget; [r][t][poa].
  static constexpr std::size_t kLinkCacheBytes = std::size_t{512} << 20;
  std::vector<LinkSweep> link_cache_;
};

/// Convenience wrapper constructing a one-shot Evaluator.
MetricsBundle evaluate(const SolutionState& solution, const Scenario& scenario,
                       std::uint64_t seed, int n_realizations, unsigned workers = 1);

}  // namespace cellless
