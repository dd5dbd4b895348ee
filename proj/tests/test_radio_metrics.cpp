#include <limits>

#include "cellless/errors.hpp"
#include "cellless/radio_metrics.hpp"
#include "cellless/solver_ctm.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cellless;

namespace {

constexpr double kOff = -std::numeric_limits<double>::infinity();

SolutionState geometry_of(const Scenario& s) {
  CtmConfig c;
  c.seed = 1;
  return ctm_geometry(s, c);
}

PanelState beam_panel(const PoA& poa, const BeamConfig& b) {
  PanelState st;
  st.geometry = poa.panel;
  st.geometry.cols = width_to_panel(b.width, poa.panel);
  st.steer = to_local(b.zenith, b.azimuth, poa.panel.mechanical_azimuth);
  return st;
}

/// Two co-channel PoAs with one beam each and one user per PoA.
Scenario duel() {
  Scenario s = fixture::empty_hall();
  s.poas.push_back(fixture::poa(1, {0.5, 5.0, 6.0}, 5e9, 0.0, {0}));
  s.poas.push_back(fixture::poa(2, {19.5, 5.0, 6.0}, 5e9, kPi, {1}));
  s.users = {fixture::user(1, 4.0, 4.0), fixture::user(2, 15.0, 6.0)};
  s.humans = {fixture::human(1, 10.0, 5.0)};
  return s;
}

}  // namespace

TEST_CASE("SINR and rate primitives") {
  const double n0w = noise_power_w(20e6);
  CHECK(sinr(n0w, n0w, 0.0) == doctest::Approx(1.0));
  CHECK(sinr(n0w, n0w, 1e300) < 1e-290);
  CHECK(shannon_rate(20e6, 1.0) == doctest::Approx(20e6));
  CHECK(shannon_rate(20e6, 31.0) == doctest::Approx(100e6));
  CHECK(shannon_rate(20e6, 0.0) == 0.0);
}

TEST_CASE("adjacent user at max power is feasible") {
  Scenario s = fixture::empty_hall();
  s.poas.push_back(fixture::poa(1, {0.5, 5.0, 6.0}, 3e9, 0.0, {0}));
  s.users = {fixture::user(1, 2.0, 5.0)};
  const auto m = evaluate(geometry_of(s), s, 3, 10);
  CHECK(m.feasible);
  CHECK(m.user_rate_bps[0] > 4 * s.users[0].required_rate_bps);
}

TEST_CASE("all PoAs off is infeasible with zero rates") {
  const auto s = fixture::shared_hall();
  auto sol = geometry_of(s);
  for (auto& [id, dbm] : sol.tx_power_dbm) dbm = kOff;
  const auto m = evaluate(sol, s, 3, 4);
  CHECK_FALSE(m.feasible);
  CHECK(m.total_power_w == 0.0);
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    CHECK(m.user_rate_bps[i] == 0.0);
    const std::string tag = "rate:user:" + std::to_string(s.users[i].id);
    CHECK(std::find(m.violated.begin(), m.violated.end(), tag) != m.violated.end());
  }
  for (double sar : m.human_sar_wkg) CHECK(sar == 0.0);
}

TEST_CASE("unserved user propagates") {
  const auto s = fixture::small_hall();
  auto sol = geometry_of(s);
  for (auto& b : sol.beams) std::erase(b.served_users, 1);
  CHECK_THROWS_AS(evaluate(sol, s, 1, 2), UnservedUser);
}

TEST_CASE("worker count does not change results") {
  const auto s = builtin_scenario("inf-dh-desk", 2);
  const auto sol = geometry_of(s);
  const auto a = evaluate(sol, s, 7, 3, 1);
  const auto b = evaluate(sol, s, 7, 3, 8);
  CHECK(a.user_rate_bps == b.user_rate_bps);
  CHECK(a.user_sinr == b.user_sinr);
  CHECK(a.human_sar_wkg == b.human_sar_wkg);
  CHECK(a.violated == b.violated);
}

TEST_CASE("SINR matches link energies of a co-channel pair") {
  const auto s = duel();
  const auto sol = geometry_of(s);
  REQUIRE(validate(sol, s).empty());
  const int n = 5;
  const Evaluator ev(s, {11, n, 1});
  const auto table = ev.fields(sol);
  const PanelState iso{};
  const double noise = noise_power_w(20e6);
  std::vector<double> rate(2, 0.0);
  for (int r = 0; r < n; ++r) {
    const auto d = ev.realization_detail(sol, table, r);
    for (int u = 0; u < 2; ++u) {
      const auto* serving = sol.serving_beam(s.users[u].id);
      const std::size_t p = s.poa_index(serving->owner_poa);
      const std::size_t q = 1 - p;
      const auto& other = *std::find_if(sol.beams.begin(), sol.beams.end(),
                                        [&](const BeamConfig& b) { return b.owner_poa == s.poas[q].id; });
      const double sig = link_energy(ev.link(r, p, u), sol.tx_power_dbm.at(s.poas[p].id),
                                     beam_panel(s.poas[p], *serving), iso);
      const double intf = link_energy(ev.link(r, q, u), sol.tx_power_dbm.at(s.poas[q].id),
                                      beam_panel(s.poas[q], other), iso);
      const double expect = sig / (noise + intf);
      CHECK(d.user_sinr[u] == doctest::Approx(expect).epsilon(1e-12));
      rate[u] += shannon_rate(20e6, expect) / n;
    }
  }
  const auto m = ev.metrics(sol, table);
  for (int u = 0; u < 2; ++u) CHECK(m.user_rate_bps[u] == doctest::Approx(rate[u]).epsilon(1e-12));
}

TEST_CASE("human exposure follows the mean power density") {
  const auto s = duel();
  const auto sol = geometry_of(s);
  const int n = 4;
  const Evaluator ev(s, {5, n, 1});
  const auto table = ev.fields(sol);
  std::vector<TapSet> sets;
  double mean_s = 0.0;
  for (int r = 0; r < n; ++r) {
    std::vector<TapSet> group;
    for (std::size_t p = 0; p < 2; ++p) {
      const auto& b = sol.beams[p];
      group.push_back(link_tap_set(ev.link(r, p, ev.human_target(0)), sol.tx_power_dbm.at(s.poas[p].id),
                                   beam_panel(s.poas[s.poa_index(b.owner_poa)], b), PanelState{}));
    }
    const double prx = coherent_energy(group);
    const auto d = ev.realization_detail(sol, table, r);
    CHECK(d.human_received_power_w[0].at(5e9) == doctest::Approx(prx).epsilon(1e-12));
    mean_s += power_density(5e9, prx) / n;
  }
  const std::vector<IncidentField> f{{5e9, incident_field(mean_s)}};
  const double sar = sar_wb(f, s.phantom("Duke"), s.frequency_map);
  CHECK(ev.metrics(sol, table).human_sar_wkg[0] == doctest::Approx(sar).epsilon(1e-12));
}

TEST_CASE("halving every power halves SAR") {
  const auto s = fixture::shared_hall();
  auto sol = geometry_of(s);
  const auto full = evaluate(sol, s, 4, 3);
  for (auto& [id, dbm] : sol.tx_power_dbm) dbm -= 10.0 * std::log10(2.0);
  const auto half = evaluate(sol, s, 4, 3);
  for (std::size_t h = 0; h < full.human_sar_wkg.size(); ++h) {
    CHECK(half.human_sar_wkg[h] == doctest::Approx(full.human_sar_wkg[h] / 2).epsilon(1e-9));
  }
  CHECK(half.total_power_w == doctest::Approx(full.total_power_w / 2).epsilon(1e-12));
}

TEST_CASE("more power never lowers SINR without co-channel PoAs") {
  const auto s = fixture::small_hall();
  auto sol = geometry_of(s);
  sol.tx_power_dbm[1] = 0.0;
  const auto low = evaluate(sol, s, 2, 3);
  sol.tx_power_dbm[1] = 10.0;
  const auto high = evaluate(sol, s, 2, 3);
  for (std::size_t u = 0; u < s.users.size(); ++u) CHECK(high.user_sinr[u] >= low.user_sinr[u]);
}

TEST_CASE("field reuse gives the same metrics") {
  const auto s = fixture::shared_hall();
  auto sol = geometry_of(s);
  const Evaluator ev(s, {3, 3, 1});
  const auto first = ev.fields(sol);
  sol.beams[0].azimuth = wrap_angle(sol.beams[0].azimuth + 0.1);
  const auto reused = ev.fields(sol, &first);
  const auto fresh = ev.fields(sol);
  CHECK(reused.beams[1] == first.beams[1]);
  const auto a = ev.metrics(sol, reused);
  const auto b = ev.metrics(sol, fresh);
  CHECK(a.user_rate_bps == b.user_rate_bps);
  CHECK(a.human_sar_wkg == b.human_sar_wkg);
}

TEST_CASE("bundle summaries") {
  MetricsBundle m;
  CHECK(m.min_rate() == std::numeric_limits<double>::infinity());
  CHECK(m.max_sar() == 0.0);
  m.user_rate_bps = {3.0, 1.0};
  m.human_sar_wkg = {0.01, 0.02};
  CHECK(m.min_rate() == 1.0);
  CHECK(m.max_sar() == 0.02);
}
