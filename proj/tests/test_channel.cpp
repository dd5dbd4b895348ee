#include <random>

#include "cellless/channel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cellless;

namespace {

PropagationSite inf_site() { return {ScenarioKind::InfDh, 0.4, 2.0}; }

LinkRealization draw(std::uint64_t key, const ChannelParams& p,
                     const PropagationSite& site = inf_site(),
                     LinkGeometry g = {{0.0, 0.0, 6.0}, {12.0, 5.0, 1.5}, 3e9}) {
  RandomStream stream(key);
  return sample_link(g, site, p, stream);
}

PanelState iso() { return {}; }

}  // namespace

TEST_CASE("LoS probability") {
  const auto p = ChannelParams::defaults(ScenarioKind::InfDh);
  CHECK(los_probability(inf_site(), 0.0, 6.0, 1.5, p) == 1.0);
  CHECK(los_probability(inf_site(), 1e4, 6.0, 1.5, p) < 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.1, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng);
    CHECK(los_probability(inf_site(), 2 * x, 6.0, 1.5, p) <= los_probability(inf_site(), x, 6.0, 1.5, p));
    const PropagationSite umi{ScenarioKind::UmiSc, 0.0, 0.0};
    const auto q = ChannelParams::defaults(ScenarioKind::UmiSc);
    const double v = los_probability(umi, x, 10.0, 1.5, q);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(los_probability(umi, 2 * x, 10.0, 1.5, q) <= v);
  }
}

TEST_CASE("pathloss is strictly increasing in distance") {
  for (auto kind : {ScenarioKind::InfDh, ScenarioKind::UmiSc}) {
    const auto p = ChannelParams::defaults(kind);
    for (bool los : {true, false}) {
      double prev = pathloss_db(los, 1.0, 5e9, p);
      for (double d = 1.5; d < 2000.0; d *= 1.3) {
        const double v = pathloss_db(los, d, 5e9, p);
        CHECK(v > prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("sample_link is a function of its stream key") {
  const auto p = ChannelParams::defaults(ScenarioKind::InfDh);
  const auto a = draw(42, p);
  const auto b = draw(42, p);
  CHECK(a.los == b.los);
  CHECK(a.shadow_db == b.shadow_db);
  REQUIRE(a.clusters.size() == b.clusters.size());
  for (std::size_t j = 0; j < a.clusters.size(); ++j) {
    CHECK(a.clusters[j].delay_s == b.clusters[j].delay_s);
    for (std::size_t l = 0; l < a.clusters[j].rays.size(); ++l) {
      CHECK(a.clusters[j].rays[l].phase == b.clusters[j].rays[l].phase);
    }
  }
  const auto c = draw(43, p);
  CHECK(c.clusters[0].rays[0].phase != a.clusters[0].rays[0].phase);
}

TEST_CASE("degenerate spreads collapse rays onto the cluster angle") {
  ChannelParams p;
  p.n_clusters = 1;
  p.n_rays = 10;
  const auto l = draw(5, p);
  REQUIRE(l.clusters.size() == 1);
  CHECK(l.clusters[0].power == 1.0);
  for (const auto& r : l.clusters[0].rays) {
    CHECK(r.departure.azimuth == doctest::Approx(l.los_departure.azimuth));
    CHECK(r.departure.zenith == doctest::Approx(l.los_departure.zenith));
  }
}

TEST_CASE("cluster powers sum to one per draw") {
  const auto p = ChannelParams::defaults(ScenarioKind::InfDh);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto l = draw(k, p);
    double sum = 0.0;
    for (const auto& c : l.clusters) sum += c.power;
    worst = std::max(worst, std::abs(sum - 1.0));
    CHECK(l.clusters.front().delay_s == 0.0);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("energy scales linearly with transmit power") {
  const auto p = ChannelParams::defaults(ScenarioKind::InfDh);
  const auto l = draw(9, p);
  PanelState tx;
  tx.geometry.rows = 4;
  tx.geometry.cols = 8;
  tx.geometry.element = ElementPattern::ThreeGpp8dBi;
  const double e0 = link_energy(l, 10.0, tx, iso());
  CHECK(e0 > 0.0);
  CHECK(link_energy(l, 20.0, tx, iso()) == doctest::Approx(10.0 * e0).epsilon(1e-12));
  CHECK(link_energy(l, -std::numeric_limits<double>::infinity(), tx, iso()) == 0.0);
}

TEST_CASE("single ray link energy is the pathloss-scaled power") {
  LinkRealization l;
  l.pathloss_db = 80.0;
  l.shadow_db = 3.0;
  l.clusters.resize(1);
  l.clusters[0].power = 1.0;
  l.clusters[0].rays.resize(1);
  l.clusters[0].rays[0].phase = 1.234;
  const double e = link_energy(l, 20.0, iso(), iso());
  CHECK(e == doctest::Approx(std::pow(10.0, (20.0 - 30.0 - 80.0 + 3.0) / 10.0)).epsilon(1e-12));
}

TEST_CASE("distinct delays add in power, same delays add coherently") {
  const auto p = ChannelParams::defaults(ScenarioKind::InfDh);
  const auto a = draw(11, p);
  const auto b = draw(12, p);
  const auto ta = link_tap_set(a, 10.0, iso(), iso());
  const auto tb = link_tap_set(b, 10.0, iso(), iso());

  // Oracle on the combined support with narrow pulses.
  std::vector<double> delays = ta.delays;
  std::vector<std::complex<double>> amps = ta.taps;
  delays.insert(delays.end(), tb.delays.begin(), tb.delays.end());
  amps.insert(amps.end(), tb.taps.begin(), tb.taps.end());
  double min_gap = 1e-6;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    for (std::size_t j = i + 1; j < delays.size(); ++j) {
      if (delays[i] != delays[j]) min_gap = std::min(min_gap, std::abs(delays[i] - delays[j]));
    }
  }
  const std::vector<TapSet> one{ta};
  CHECK(coherent_energy(one) == doctest::Approx(link_energy(a, 10.0, iso(), iso())).epsilon(1e-12));
  CHECK(coherent_energy(one) ==
        doctest::Approx(oracle::grid_energy(ta.delays, ta.taps, min_gap / 2)).epsilon(1e-9));

  // Both links have a first cluster at excess delay 0, so those taps add
  // coherently; the oracle sees the same overlap.
  const std::vector<TapSet> both{ta, tb};
  CHECK(coherent_energy(both) ==
        doctest::Approx(oracle::grid_energy(delays, amps, min_gap / 2)).epsilon(1e-9));

  // Shift one link so that no delays coincide: energies add.
  TapSet shifted = tb;
  for (auto& d : shifted.delays) d += 1e-3;
  const std::vector<TapSet> apart{ta, shifted};
  CHECK(coherent_energy(apart) == doctest::Approx(coherent_energy(one) + coherent_energy(std::vector<TapSet>{tb})).epsilon(1e-12));
}

TEST_CASE("interference energy") {
  const auto p = ChannelParams::defaults(ScenarioKind::InfDh);
  CHECK(interference_energy({}, {}, {}, iso()) == 0.0);
  const std::vector<LinkRealization> links{draw(21, p)};
  const std::vector<PanelState> panels{iso()};
  const std::vector<double> powers{17.0};
  CHECK(interference_energy(links, panels, powers, iso()) ==
        doctest::Approx(link_energy(links[0], 17.0, iso(), iso())).epsilon(1e-12));
}

TEST_CASE("large K approaches the pure LoS closed form") {
  ChannelParams p = ChannelParams::defaults(ScenarioKind::InfDh);
  p.rician_k_mean_db = 60.0;
  p.rician_k_sigma_db = 0.0;
  const PropagationSite open{ScenarioKind::InfDh, 0.0, 0.0};
  PanelGeometry g;
  g.rows = 4;
  g.cols = 8;
  g.element = ElementPattern::ThreeGpp8dBi;
  int checked = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto l = draw(k, p, open);
    REQUIRE(l.los);
    const auto steer = to_local(l.los_departure.zenith, l.los_departure.azimuth, 0.0);
    const PanelState tx{g, steer};
    const double e = link_energy(l, 0.0, tx, iso());
    const auto f = panel_field(g, steer.zenith, steer.azimuth, steer);
    const double closed = std::pow(10.0, (-30.0 - l.pathloss_db + l.shadow_db) / 10.0) * std::norm(f);
    CHECK(std::abs(e / closed - 1.0) < 1e-3);
    ++checked;
  }
  CHECK(checked == 200);
}
