#include "cellless/solver_ctm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cellless/errors.hpp"
#include "cellless/random.hpp"

namespace cellless {

namespace {

double sq_dist(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

int nearest(const Point2& p, const std::vector<Point2>& centroids) {
  int best = 0;
  double best_d = sq_dist(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<Point2> seed_plus_plus(std::span<const Point2> points, int k, RandomStream& rng) {
  const std::size_t n = points.size();
  std::vector<Point2> centroids;
  centroids.reserve(k);
  auto pick_uniform = [&] {
    return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
  };
  centroids.push_back(points[pick_uniform()]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points[i], centroids[0]);
  while (static_cast<int>(centroids.size()) < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick_uniform();
    }
    centroids.push_back(points[chosen]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
  }
  return centroids;
}

Clustering lloyd(std::span<const Point2> points, std::vector<Point2> centroids, int max_iters) {
  const std::size_t n = points.size();
  const int k = static_cast<int>(centroids.size());
  std::vector<int> assign(n, -1);
  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = nearest(points[i], centroids);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Point2> sum(k);
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[assign[i]].x += points[i].x;
      sum[assign[i]].y += points[i].y;
      ++count[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) centroids[c] = {sum[c].x / count[c], sum[c].y / count[c]};
    }
  }
  Clustering out;
  out.assignments = std::move(assign);
  out.sizes.assign(k, 0);
  std::vector<Point2> sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = out.assignments[i];
    ++out.sizes[c];
    sum[c].x += points[i].x;
    sum[c].y += points[i].y;
  }
  for (int c = 0; c < k; ++c) {
    if (out.sizes[c] > 0) centroids[c] = {sum[c].x / out.sizes[c], sum[c].y / out.sizes[c]};
  }
  out.centroids = std::move(centroids);
  out.wcss = wcss(points, out.assignments, k);
  return out;
}

}  // namespace

double wcss(std::span<const Point2> points, std::span<const int> assignments, int k) {
  std::vector<Point2> mean(k);
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    mean[assignments[i]].x += points[i].x;
    mean[assignments[i]].y += points[i].y;
    ++count[assignments[i]];
  }
  for (int c = 0; c < k; ++c) {
    if (count[c] > 0) mean[c] = {mean[c].x / count[c], mean[c].y / count[c]};
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) total += sq_dist(points[i], mean[assignments[i]]);
  return total;
}

Clustering kmeans(std::span<const Point2> points, int k, int restarts, int max_iters,
                  std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k-means needs k >= 1");
  if (points.empty()) {
    Clustering empty;
    empty.centroids.assign(k, Point2{});
    empty.sizes.assign(k, 0);
    return empty;
  }
  Clustering best;
  bool have = false;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    RandomStream rng(stream_key({seed, 0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)}));
    auto c = lloyd(points, seed_plus_plus(points, k, rng), max_iters);
    if (!have || c.wcss < best.wcss) {
      best = std::move(c);
      have = true;
    }
  }
  return best;
}

Clustering cluster_users(std::span<const EndUser> users, int k, const CtmConfig& config) {
  std::vector<Point2> pts;
  pts.reserve(users.size());
  for (const auto& u : users) pts.push_back({u.position.x, u.position.y});
  return kmeans(pts, k, config.kmeans_restarts, config.kmeans_max_iters, config.seed);
}

Assignment hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost) {
    if (row.size() != n) throw std::invalid_argument("hungarian: cost matrix must be square");
  }
  Assignment out;
  if (n == 0) return out;
  // Shortest augmenting paths with row/column potentials; 1-based with a
  // virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  out.col_of_row.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) out.col_of_row[p[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i) out.cost += cost[i][out.col_of_row[i]];
  return out;
}

std::vector<int> match_clusters(const Clustering& clustering, const Scenario& scenario,
                                double user_height) {
  const auto beams = scenario.all_beams();
  const std::size_t k = clustering.centroids.size();
  if (k != beams.size()) {
    throw std::invalid_argument("cluster count must equal the number of beams");
  }
  // Rows are beams, columns clusters.
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
  for (std::size_t b = 0; b < k; ++b) {
    const auto& poa = scenario.poa(scenario.beam_owner(beams[b]));
    for (std::size_t c = 0; c < k; ++c) {
      if (clustering.sizes[c] == 0) continue;
      const Position3D centroid{clustering.centroids[c].x, clustering.centroids[c].y, user_height};
      cost[b][c] = distance_3d(poa.position, centroid);
    }
  }
  return hungarian(cost).col_of_row;
}

double user_azimuth(const Position3D& poa, const Position3D& user) {
  const double dx = user.x - poa.x;
  const double dy = user.y - poa.y;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) return 0.0;
  const double a = std::acos(std::clamp(dx / r, -1.0, 1.0));
  return dy < 0.0 ? -a : a;
}

Arc minimal_arc(std::span<const double> angles) {
  if (angles.empty()) return {};
  std::vector<double> a;
  a.reserve(angles.size());
  for (double x : angles) {
    double w = std::fmod(x, kTwoPi);
    if (w < 0) w += kTwoPi;
    if (w >= kTwoPi) w -= kTwoPi;
    a.push_back(w);
  }
  std::sort(a.begin(), a.end());
  // The complement of the largest gap between neighbours is the arc.
  double best_gap = a.front() + kTwoPi - a.back();
  std::size_t start = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double gap = a[i] - a[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      start = i;
    }
  }
  return {wrap_angle(a[start]), kTwoPi - best_gap};
}

double beam_width(std::span<const double> azimuths, double min_width) {
  return std::max(min_width, minimal_arc(azimuths).width);
}

Steering steer_beam(const Position3D& poa, std::span<const double> azimuths,
                    const Position3D& centroid) {
  Steering s;
  s.azimuth = minimal_arc(azimuths).midpoint();
  const double d = distance_3d(poa, centroid);
  s.zenith = d > 0.0 ? std::acos(std::clamp((centroid.z - poa.z) / d, -1.0, 1.0)) : kPi / 2;
  return s;
}

SolutionState ctm_geometry(const Scenario& scenario, const CtmConfig& config) {
  const auto beams = scenario.all_beams();
  const int k = static_cast<int>(beams.size());
  if (k == 0) throw std::invalid_argument("scenario has no beams");
  SolutionState sol;
  std::vector<int> match(k, -1);
  Clustering clustering;
  double user_height = 0.0;
  if (!scenario.users.empty()) {
    clustering = cluster_users(scenario.users, k, config);
    for (const auto& u : scenario.users) user_height += u.position.z;
    user_height /= static_cast<double>(scenario.users.size());
    match = match_clusters(clustering, scenario, user_height);
  }
  for (int b = 0; b < k; ++b) {
    const PoA& poa = scenario.poa(scenario.beam_owner(beams[b]));
    BeamConfig cfg;
    cfg.beam_id = beams[b];
    cfg.owner_poa = poa.id;
    cfg.azimuth = wrap_angle(poa.panel.mechanical_azimuth);
    cfg.zenith = kPi / 2;
    cfg.width = poa.min_beam_width;
    if (match[b] >= 0) {
      std::vector<double> az;
      double z = 0.0;
      for (std::size_t i = 0; i < scenario.users.size(); ++i) {
        if (clustering.assignments[i] != match[b]) continue;
        cfg.served_users.push_back(scenario.users[i].id);
        az.push_back(user_azimuth(poa.position, scenario.users[i].position));
        z += scenario.users[i].position.z;
      }
      if (!az.empty()) {
        std::sort(cfg.served_users.begin(), cfg.served_users.end());
        const auto& c = clustering.centroids[match[b]];
        const auto st = steer_beam(poa.position, az, {c.x, c.y, z / az.size()});
        cfg.azimuth = st.azimuth;
        cfg.zenith = st.zenith;
        cfg.width = beam_width(az, poa.min_beam_width);
      }
    }
    sol.beams.push_back(std::move(cfg));
  }
  for (const auto& p : scenario.poas) {
    sol.tx_power_dbm[p.id] =
        poa_active(sol, p.id) ? p.max_tx_power_dbm : -std::numeric_limits<double>::infinity();
  }
  return sol;
}

// Guards the descent against checks that never fail.
constexpr double kPowerFloorDbm = -300.0;

std::map<int, double> reduce_powers(std::map<int, double> powers, double delta_db,
                                    int refinement_rounds, const FeasibilityCheck& feasible) {
  if (!(delta_db > 0.0)) throw std::invalid_argument("delta must be positive");
  if (refinement_rounds < 0) throw std::invalid_argument("refinement_rounds must be >= 0");
  double delta = delta_db;
  for (int round = 0; round <= refinement_rounds; ++round, delta /= 2) {
    bool moved = true;
    while (moved) {
      moved = false;
      std::vector<std::pair<double, int>> order;
      for (const auto& [id, dbm] : powers) {
        if (std::isfinite(dbm)) order.emplace_back(dbm, id);
      }
      std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      for (const auto& [start, id] : order) {
        while (powers[id] - delta >= kPowerFloorDbm) {
          auto trial = powers;
          trial[id] -= delta;
          if (!feasible(trial)) break;
          powers = std::move(trial);
          moved = true;
        }
      }
    }
  }
  return powers;
}

namespace {

double final_delta(const CtmConfig& c) { return std::ldexp(c.delta_db, -c.refinement_rounds); }

}  // namespace

SolutionState reduce_powers(const SolutionState& solution, const Scenario& scenario,
                            const CtmConfig& config) {
  Evaluator ev(scenario, {config.seed, config.realizations_per_check, config.workers});
  const FieldTable table = ev.fields(solution);
  SolutionState trial = solution;
  const FeasibilityCheck check = [&](const std::map<int, double>& powers) {
    trial.tx_power_dbm = powers;
    return ev.metrics(trial, table).feasible;
  };
  if (!check(solution.tx_power_dbm)) {
    throw NoFeasibleSolution("no feasible solution at max power");
  }
  SolutionState out = solution;
  out.tx_power_dbm = reduce_powers(solution.tx_power_dbm, config.delta_db,
                                   config.refinement_rounds, check);
  return out;
}

CtmResult solve_ctm(const Scenario& scenario, const CtmConfig& config) {
  CtmResult r;
  r.solution = reduce_powers(ctm_geometry(scenario, config), scenario, config);
  r.metrics = evaluate(r.solution, scenario, config.seed, config.realizations_per_check,
                       config.workers);
  r.final_delta_db = final_delta(config);
  return r;
}

}  // namespace cellless
