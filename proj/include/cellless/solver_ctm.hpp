#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "cellless/radio_metrics.hpp"
#include "cellless/scenario.hpp"
#include "cellless/solution.hpp"

namespace cellless {

struct CtmConfig {
  double delta_db = 1.0;
  int refinement_rounds = 3;
  int kmeans_restarts = 10;
  int kmeans_max_iters = 100;
  int realizations_per_check = 10;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Clustering {
  std::vector<int> assignments;  // per input point
  std::vector<Point2> centroids; // k entries
  std::vector<int> sizes;        // k entries; 0 marks an empty cluster
  double wcss = 0.0;
};

/// Within-cluster sum of squared distances to each cluster's mean.
double wcss(std::span<const Point2> points, std::span<const int> assignments, int k);

/// k-means++ seeded Lloyd iterations, best of `restarts` by WCSS. Ties in
/// the nearest-centroid rule go to the lowest index; clusters may be empty.
Clustering kmeans(std::span<const Point2> points, int k, int restarts, int max_iters,
                  std::uint64_t seed);

/// k-means on the users' (x, y) positions.
Clustering cluster_users(std::span<const EndUser> users, int k, const CtmConfig& config);

struct Assignment {
  std::vector<int> col_of_row;
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix, O(n^3).
Assignment hungarian(const std::vector<std::vector<double>>& cost);

/// Optimal one-to-one beam/cluster matching. Result is indexed like
/// Scenario::all_beams() and holds the matched cluster index. Cost is the
/// 3-D distance from the beam's PoA to the cluster centroid placed at
/// `user_height`; empty clusters cost 0.
std::vector<int> match_clusters(const Clustering& clustering, const Scenario& scenario,
                                double user_height);

/// sgn(dy) * arccos(dx / r) with sgn(0) = +1; 0 for coincident (x, y).
double user_azimuth(const Position3D& poa, const Position3D& user);

/// Smallest circular arc containing all angles.
struct Arc {
  double start = 0.0;  // counter-clockwise edge, wrapped
  double width = 0.0;
  double midpoint() const { return wrap_angle(start + width / 2); }
};
Arc minimal_arc(std::span<const double> angles);

/// max(min_width, width of the minimal arc containing all azimuths).
double beam_width(std::span<const double> azimuths, double min_width);

struct Steering {
  double azimuth = 0.0;
  double zenith = kPi / 2;
};

/// Azimuth: midpoint of the covered arc. Zenith: toward the centroid.
Steering steer_beam(const Position3D& poa, std::span<const double> azimuths,
                    const Position3D& centroid);

/// Steps 1-3 without power reduction: every PoA with an active beam at
/// max power, the rest off (-inf). Unused beams point along boresight.
SolutionState ctm_geometry(const Scenario& scenario, const CtmConfig& config);

using FeasibilityCheck = std::function<bool(const std::map<int, double>& powers_dbm)>;

/// Per-PoA descent: PoAs are visited in descending power (then id), each
/// reduced by delta while `feasible` holds; passes repeat until nothing
/// moves, then delta is halved `refinement_rounds` times. Entries at -inf
/// are left alone. On return no single finite entry can be lowered by the
/// final delta without breaking feasibility.
std::map<int, double> reduce_powers(std::map<int, double> powers_dbm, double delta_db,
                                    int refinement_rounds, const FeasibilityCheck& feasible);

/// Power reduction against `evaluate` with a fixed seed. Throws
/// NoFeasibleSolution when the input itself is infeasible.
SolutionState reduce_powers(const SolutionState& solution, const Scenario& scenario,
                            const CtmConfig& config);

struct CtmResult {
  SolutionState solution;
  MetricsBundle metrics;
  double final_delta_db = 0.0;
};

CtmResult solve_ctm(const Scenario& scenario, const CtmConfig& config);

}  // namespace cellless
