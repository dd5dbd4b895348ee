#pragma once

#include <cmath>
#include <vector>

#include "json.hpp"

#include "cellless/scenario.hpp"

namespace fixture {

using namespace cellless;

inline PoA poa(int id, Position3D pos, double freq, double azimuth, std::vector<int> beams,
               int rows = 4, int cols = 8) {
  PoA p;
  p.id = id;
  p.position = pos;
  p.frequency_hz = freq;
  p.bandwidth_hz = 20e6;
  p.max_tx_power_dbm = 24.0;
  p.panel.rows = rows;
  p.panel.cols = cols;
  p.panel.mechanical_azimuth = azimuth;
  p.panel.element = ElementPattern::ThreeGpp8dBi;
  p.min_beam_width = kBeamwidthConstant / cols;
  p.beams = std::move(beams);
  return p;
}

/// A 20 m x 10 m hall without entities.
inline Scenario empty_hall() {
  Scenario s;
  s.name = "hall";
  s.kind = ScenarioKind::InfDh;
  s.bounds = {20.0, 10.0, 8.0};
  s.clutter = {0.4, 2.0};
  s.channel = ChannelParams::defaults(ScenarioKind::InfDh);
  s.channel.n_clusters = 6;
  s.channel.n_rays = 8;
  s.phantoms = default_phantoms();
  s.frequency_map = default_frequency_map();
  return s;
}

inline EndUser user(int id, double x, double y) { return {id, {x, y, 1.5}, 100e6}; }

inline Human human(int id, double x, double y, std::optional<int> linked = std::nullopt) {
  return {id, {x, y, 1.5}, "Duke", linked};
}

/// One PoA on the west wall with two beams, three users, two humans.
inline Scenario small_hall() {
  Scenario s = empty_hall();
  s.poas.push_back(poa(1, {0.5, 5.0, 6.0}, 3e9, 0.0, {0, 1}));
  s.users = {user(1, 4.0, 3.0), user(2, 5.0, 7.0), user(3, 9.0, 6.0)};
  s.humans = {human(1, 6.0, 4.0), human(2, 5.0, 7.0, 2)};
  return s;
}

/// Two co-channel PoAs on opposite walls plus one on another band.
inline Scenario shared_hall() {
  Scenario s = empty_hall();
  s.poas.push_back(poa(1, {0.5, 5.0, 6.0}, 5e9, 0.0, {0, 1}));
  s.poas.push_back(poa(2, {19.5, 5.0, 6.0}, 5e9, kPi, {2, 3}));
  s.poas.push_back(poa(3, {10.0, 0.5, 6.0}, 3e9, kPi / 2, {4, 5}));
  s.users = {user(1, 3.0, 3.0), user(2, 4.0, 7.0), user(3, 16.0, 4.0), user(4, 17.0, 8.0),
             user(5, 10.0, 3.0), user(6, 12.0, 5.0)};
  s.humans = {human(1, 8.0, 5.0), human(2, 16.0, 4.0, 3), human(3, 11.0, 8.0)};
  return s;
}

/// Structural equality of two JSON documents with numbers compared to a
/// relative tolerance (angles pass through degrees in files).
inline bool json_near(const nlohmann::json& a, const nlohmann::json& b, double rel = 1e-12) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return x == y || std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y));
  }
  if (a.type() != b.type() || a.size() != b.size()) return false;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()) || !json_near(it.value(), b.at(it.key()), rel)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_near(a[i], b[i], rel)) return false;
    }
    return true;
  }
  return a == b;
}

}  // namespace fixture
