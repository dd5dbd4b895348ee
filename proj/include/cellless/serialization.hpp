#pragma once

#include <string>

#include "cellless/radio_metrics.hpp"
#include "cellless/scenario.hpp"
#include "cellless/solution.hpp"

namespace cellless {

/// Formats a double so that it parses back to the same value.
std::string format_double(double v);

/// One row per user (entity=user) and per human (entity=human):
/// entity,id,x,y,phantom,rate_bps,sar_wkg
std::string metrics_to_csv(const MetricsBundle& metrics, const Scenario& scenario);

/// Totals, per-PoA powers, feasibility and violated constraints.
std::string summary_to_json(const MetricsBundle& metrics, const std::string& scenario_name,
                            std::uint64_t seed, const std::string& solver);

/// Rebuilds the bundle fields stored in metrics.csv and summary.json.
/// SINR, interference and power densities are not stored and stay empty.
MetricsBundle parse_metrics(const std::string& metrics_csv, const std::string& summary_json);

/// Per-link channel draws (LoS state, pathloss, shadowing, K, cluster
/// delays and powers) for every PoA/target pair, as JSON.
std::string links_to_json(const Evaluator& evaluator);

}  // namespace cellless
