#include <limits>

#include "cellless/solver_ctm.hpp"
#include "cellless/solver_maxrate.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cellless;

TEST_CASE("objective is the minimum rate") {
  MetricsBundle m;
  m.user_ids = {1};
  m.user_rate_bps = {5e7};
  CHECK(objective(m) == 5e7);
  m.user_ids = {1, 2, 3};
  m.user_rate_bps = {3e8, 1e8, 2e8};
  const double a = objective(m);
  m.user_ids = {3, 1, 2};
  m.user_rate_bps = {2e8, 3e8, 1e8};
  CHECK(objective(m) == a);
  CHECK(a == 1e8);
}

TEST_CASE("unserved structure scores minus infinity") {
  const auto s = fixture::small_hall();
  auto sol = maxrate_initial_state(s, 1);
  for (auto& b : sol.beams) std::erase(b.served_users, 2);
  CHECK(objective(sol, s, 1, 2) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("zero steps leave the state unchanged") {
  const auto s = fixture::shared_hall();
  const auto sol = maxrate_initial_state(s, 1);
  AnnealConfig c;
  c.power_step_db = 0.0;
  c.angle_step = 0.0;
  c.width_step = 0.0;
  c.reassign_weight = 0.0;
  RandomStream rng(9);
  for (int i = 0; i < 200; ++i) CHECK(neighbor(sol, s, c, rng) == sol);
}

TEST_CASE("power moves are capped at the maximum") {
  const auto s = fixture::small_hall();
  const auto sol = maxrate_initial_state(s, 1);
  AnnealConfig c;
  c.power_step_db = 3.0;
  RandomStream rng(4);
  for (int i = 0; i < 500; ++i) {
    const auto n = neighbor(sol, s, c, rng);
    CHECK(n.tx_power_dbm.at(1) <= 24.0);
  }
}

TEST_CASE("neighbor fuzz keeps states legal") {
  const auto s = fixture::shared_hall();
  auto sol = maxrate_initial_state(s, 2);
  AnnealConfig c;
  c.angle_step = 0.7;
  c.width_step = 0.5;
  c.power_step_db = 4.0;
  RandomStream rng(10);
  for (int i = 0; i < 10000; ++i) {
    sol = neighbor(sol, s, c, rng);
    const auto v = validate(sol, s);
    CHECK(v.empty());
    if (!v.empty()) break;
  }
}

TEST_CASE("no moves returns the initial state") {
  const auto s = fixture::small_hall();
  AnnealConfig c;
  c.seed = 3;
  c.iterations = 1;
  c.moves_per_temp = 0;
  c.calibration_probes = 0;
  c.initial_temp = 1e6;
  c.n_realizations = 2;
  const auto r = solve_maxrate(s, c);
  CHECK(r.solution == maxrate_initial_state(s, 3));
}

TEST_CASE("annealing is deterministic and keeps its best") {
  const auto s = fixture::shared_hall();
  AnnealConfig c;
  c.seed = 5;
  c.iterations = 15;
  c.moves_per_temp = 6;
  c.calibration_probes = 20;
  c.n_realizations = 2;
  const auto a = solve_maxrate(s, c);
  const auto b = solve_maxrate(s, c);
  CHECK(a.solution == b.solution);
  CHECK(a.best_history == b.best_history);
  CHECK(a.initial_temp > 0.0);
  for (std::size_t i = 1; i < a.best_history.size(); ++i) {
    CHECK(a.best_history[i] >= a.best_history[i - 1]);
  }
  CHECK(objective(a.metrics) == a.best_history.back());
  c.workers = 4;
  c.parallel_candidates = 1;
  CHECK(solve_maxrate(s, c).solution == a.solution);
}

TEST_CASE("parallel candidates are deterministic across workers") {
  const auto s = fixture::shared_hall();
  AnnealConfig c;
  c.seed = 8;
  c.iterations = 6;
  c.moves_per_temp = 4;
  c.calibration_probes = 10;
  c.n_realizations = 2;
  c.parallel_candidates = 3;
  c.workers = 1;
  const auto a = solve_maxrate(s, c);
  c.workers = 3;
  CHECK(solve_maxrate(s, c).solution == a.solution);
}

TEST_CASE("MaxRate rates beat CtM and use more power") {
  const auto s = fixture::shared_hall();
  CtmConfig cc;
  cc.seed = 6;
  cc.realizations_per_check = 4;
  const auto ctm = solve_ctm(s, cc);
  AnnealConfig ac;
  ac.seed = 6;
  ac.n_realizations = 4;
  ac.iterations = 20;
  ac.moves_per_temp = 5;
  ac.calibration_probes = 20;
  const auto mr = solve_maxrate(s, ac);
  CHECK(mr.metrics.min_rate() >= ctm.metrics.min_rate());
  CHECK(mr.metrics.total_power_w >= ctm.metrics.total_power_w);
}
