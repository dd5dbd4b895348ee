#include "cellless/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cellless/errors.hpp"
#include "cellless/random.hpp"

namespace cellless {

std::size_t Scenario::poa_index(int poa_id) const {
  for (std::size_t i = 0; i < poas.size(); ++i) {
    if (poas[i].id == poa_id) return i;
  }
  throw std::out_of_range("unknown PoA id " + std::to_string(poa_id));
}

std::size_t Scenario::user_index(int user_id) const {
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i].id == user_id) return i;
  }
  throw std::out_of_range("unknown user id " + std::to_string(user_id));
}

const PhantomProfile& Scenario::phantom(std::string_view phantom_name) const {
  for (const auto& p : phantoms) {
    if (p.name == phantom_name) return p;
  }
  throw std::out_of_range("unknown phantom " + std::string(phantom_name));
}

int Scenario::beam_owner(int beam_id) const {
  for (const auto& p : poas) {
    if (std::find(p.beams.begin(), p.beams.end(), beam_id) != p.beams.end()) return p.id;
  }
  throw std::out_of_range("unknown beam id " + std::to_string(beam_id));
}

std::vector<int> Scenario::all_beams() const {
  std::vector<int> out;
  for (const auto& p : poas) out.insert(out.end(), p.beams.begin(), p.beams.end());
  return out;
}

std::string_view to_string(ScenarioKind kind) {
  return kind == ScenarioKind::InfDh ? "InF-DH" : "UMI-SC";
}

ScenarioKind scenario_kind_from_string(std::string_view s) {
  if (s == "InF-DH" || s == "inf-dh") return ScenarioKind::InfDh;
  if (s == "UMI-SC" || s == "umi-sc" || s == "UMi-SC") return ScenarioKind::UmiSc;
  throw ValidationError("kind", "unknown scenario kind '" + std::string(s) + "'");
}

namespace {

std::string indexed(const char* list, std::size_t i, const char* field) {
  return std::string(list) + "[" + std::to_string(i) + "]." + field;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

void check_position(const Position3D& p, const Bounds& b, const std::string& field) {
  require(p.z >= 0.0, field + ".z", "height must be non-negative");
  require(p.x >= 0.0 && p.x <= b.length && p.y >= 0.0 && p.y <= b.width,
          field, "position outside the scenario bounds");
}

}  // namespace

void validate_scenario(const Scenario& s) {
  require(s.schema_version == kScenarioSchemaVersion, "schema_version",
          "unsupported schema version " + std::to_string(s.schema_version));
  require(s.bounds.length > 0 && s.bounds.width > 0 && s.bounds.height > 0, "bounds_m",
          "bounds must be positive");
  require(s.clutter.density >= 0.0 && s.clutter.density < 1.0, "clutter.density",
          "must lie in [0, 1)");
  require(s.clutter.height_m >= 0.0, "clutter.height_m", "must be non-negative");
  require(s.sar_limit_wkg > 0.0, "limits.sar_wkg", "must be positive");
  require(s.min_poa_user_distance_m >= 0.0, "limits.min_poa_user_distance_m",
          "must be non-negative");

  const auto& c = s.channel;
  require(c.n_rays >= 1, "channel_params.n_rays", "must be at least 1");
  require(c.n_clusters >= 1, "channel_params.n_clusters", "must be at least 1");
  require(c.delay_spread_s > 0.0, "channel_params.delay_spread_s", "must be positive");
  require(c.azimuth_spread_dep >= 0 && c.azimuth_spread_arr >= 0 && c.zenith_spread_dep >= 0 &&
              c.zenith_spread_arr >= 0 && c.ray_spread_azimuth >= 0 && c.ray_spread_zenith >= 0,
          "channel_params", "angular spreads must be non-negative");
  require(c.shadow_sigma_los_db >= 0 && c.shadow_sigma_nlos_db >= 0 && c.rician_k_sigma_db >= 0,
          "channel_params", "standard deviations must be non-negative");

  for (std::size_t i = 0; i < s.phantoms.size(); ++i) {
    const auto& p = s.phantoms[i];
    require(p.bmi > 0, indexed("phantoms", i, "bmi"), "must be positive");
    require(p.bmi_ref > 0, indexed("phantoms", i, "bmi_ref"), "must be positive");
    require(p.e_ref_vpm > 0, indexed("phantoms", i, "e_ref_vpm"), "must be positive");
    for (const auto& [f, v] : p.sar_ref) {
      require(v > 0, indexed("phantoms", i, "sar_ref"), "reference SAR must be positive");
    }
  }

  std::set<int> poa_ids;
  std::set<int> beam_ids;
  for (std::size_t i = 0; i < s.poas.size(); ++i) {
    const auto& p = s.poas[i];
    require(poa_ids.insert(p.id).second, indexed("poas", i, "id"), "duplicate PoA id");
    require(p.frequency_hz > 0, indexed("poas", i, "frequency_hz"), "must be positive");
    require(p.bandwidth_hz > 0, indexed("poas", i, "bandwidth_hz"), "must be positive");
    require(p.min_beam_width > 0 && p.min_beam_width <= kPi,
            indexed("poas", i, "min_beam_width_deg"), "must lie in (0, 180]");
    require(p.panel.rows >= 1 && p.panel.cols >= 1, indexed("poas", i, "panel"),
            "rows and cols must be at least 1");
    require(p.panel.v_spacing > 0 && p.panel.h_spacing > 0, indexed("poas", i, "panel"),
            "element spacing must be positive");
    check_position(p.position, s.bounds, indexed("poas", i, "position"));
    for (int b : p.beams) {
      require(beam_ids.insert(b).second, indexed("poas", i, "beams"),
              "beam id " + std::to_string(b) + " used twice");
    }
    require(s.frequency_map.contains(p.frequency_hz), indexed("poas", i, "frequency_hz"),
            "frequency has no entry in frequency_map");
  }

  std::set<int> user_ids;
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    const auto& u = s.users[i];
    require(user_ids.insert(u.id).second, indexed("users", i, "id"), "duplicate user id");
    require(u.required_rate_bps > 0, indexed("users", i, "required_rate_bps"), "must be positive");
    check_position(u.position, s.bounds, indexed("users", i, "position"));
    if (s.kind == ScenarioKind::UmiSc && s.min_poa_user_distance_m > 0) {
      for (const auto& p : s.poas) {
        require(distance_2d(p.position, u.position) >= s.min_poa_user_distance_m,
                indexed("users", i, "position"),
                "closer than min_poa_user_distance_m to PoA " + std::to_string(p.id));
      }
    }
  }

  std::set<int> human_ids;
  std::set<std::string> used_phantoms;
  for (std::size_t i = 0; i < s.humans.size(); ++i) {
    const auto& h = s.humans[i];
    require(human_ids.insert(h.id).second, indexed("humans", i, "id"), "duplicate human id");
    check_position(h.position, s.bounds, indexed("humans", i, "position"));
    const bool known = std::any_of(s.phantoms.begin(), s.phantoms.end(),
                                   [&](const auto& p) { return p.name == h.phantom; });
    require(known, indexed("humans", i, "phantom"), "unknown phantom '" + h.phantom + "'");
    used_phantoms.insert(h.phantom);
    if (h.linked_user) {
      require(user_ids.count(*h.linked_user) == 1, indexed("humans", i, "linked_user"),
              "unknown user id");
      require(s.user(*h.linked_user).position == h.position, indexed("humans", i, "position"),
              "must coincide with the linked user's position");
    }
  }

  for (std::size_t i = 0; i < s.phantoms.size(); ++i) {
    const auto& ph = s.phantoms[i];
    if (!used_phantoms.count(ph.name)) continue;
    for (const auto& p : s.poas) {
      const double ref = s.frequency_map.reference_for(p.frequency_hz);
      bool found = false;
      for (const auto& [f, v] : ph.sar_ref) {
        found = found || std::abs(f - ref) <= 1e-9 * ref;
      }
      require(found, indexed("phantoms", i, "sar_ref"),
              "no value at reference frequency " + std::to_string(ref));
    }
  }

  if (s.placement) {
    const auto& pl = *s.placement;
    require(pl.n_users >= 0 && pl.n_humans >= 0, "placement", "counts must be non-negative");
    require(pl.n_linked_humans >= 0 && pl.n_linked_humans <= std::min(pl.n_users, pl.n_humans),
            "placement.linked_humans", "cannot exceed the user or human count");
    require(pl.required_rate_bps > 0, "placement.required_rate_bps", "must be positive");
    require(pl.n_humans == 0 || !pl.phantom_pool.empty(), "placement.phantom_pool",
            "must name at least one phantom");
  }
}

Scenario generate_placements(const Scenario& tmpl, std::uint64_t seed) {
  if (!tmpl.placement) {
    throw PlacementError("scenario '" + tmpl.name + "' has no placement section");
  }
  const PlacementSpec& spec = *tmpl.placement;
  Scenario s = tmpl;
  s.users.clear();
  s.humans.clear();
  RandomStream rng(stream_key({seed, 0x706c6163656d656eULL}));

  auto draw_xy = [&](double height, bool keep_clear) {
    for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
      Position3D p{rng.uniform(0.0, s.bounds.length), rng.uniform(0.0, s.bounds.width), height};
      if (!keep_clear) return p;
      const bool clear = std::all_of(s.poas.begin(), s.poas.end(), [&](const PoA& poa) {
        return distance_2d(poa.position, p) >= s.min_poa_user_distance_m;
      });
      if (clear) return p;
    }
    throw PlacementError("could not place an entity after " + std::to_string(spec.max_attempts) +
                         " attempts; exclusion zones cover the area");
  };

  const bool keep_clear = s.kind == ScenarioKind::UmiSc && s.min_poa_user_distance_m > 0;
  for (int i = 0; i < spec.n_users; ++i) {
    s.users.push_back({i, draw_xy(spec.user_height_m, keep_clear), spec.required_rate_bps});
  }
  for (int i = 0; i < spec.n_humans; ++i) {
    Human h;
    h.id = i;
    if (i < spec.n_linked_humans) {
      h.linked_user = s.users[i].id;
      h.position = s.users[i].position;
    } else {
      h.position = draw_xy(spec.human_height_m, false);
    }
    const auto pick = static_cast<std::size_t>(rng.uniform() * spec.phantom_pool.size());
    h.phantom = spec.phantom_pool[std::min(pick, spec.phantom_pool.size() - 1)];
    s.humans.push_back(std::move(h));
  }
  validate_scenario(s);
  return s;
}

namespace {

PanelGeometry default_panel(double mechanical_azimuth) {
  PanelGeometry g;
  g.rows = 16;
  g.cols = 32;
  g.v_spacing = 0.5;
  g.h_spacing = 0.5;
  g.mechanical_azimuth = mechanical_azimuth;
  g.element = ElementPattern::ThreeGpp8dBi;
  return g;
}

PoA make_poa(int id, Position3D pos, double freq, double max_dbm, double azimuth, int beams,
             int& next_beam) {
  PoA p;
  p.id = id;
  p.position = pos;
  p.frequency_hz = freq;
  p.bandwidth_hz = 20e6;
  p.max_tx_power_dbm = max_dbm;
  p.panel = default_panel(azimuth);
  p.min_beam_width = kBeamwidthConstant / p.panel.cols;
  for (int b = 0; b < beams; ++b) p.beams.push_back(next_beam++);
  return p;
}

Scenario inf_dh_template(int users, int humans, int beams_per_poa) {
  Scenario s;
  s.kind = ScenarioKind::InfDh;
  s.bounds = {80.0, 20.0, 8.0};
  s.clutter = {0.4, 2.0};
  s.sar_limit_wkg = kIcnirpWholeBodyLimit;
  s.channel = ChannelParams::defaults(ScenarioKind::InfDh);
  s.frequency_map = default_frequency_map();
  for (auto& p : default_phantoms()) {
    if (p.name == "Ella" || p.name == "Duke") s.phantoms.push_back(p);
  }
  const double max_dbm = 24.0;
  int beam = 0;
  // 3 GHz PoAs on the short walls looking down the hall.
  s.poas.push_back(make_poa(1, {0.5, 10.0, 7.0}, 3e9, max_dbm, 0.0, beams_per_poa, beam));
  s.poas.push_back(make_poa(2, {79.5, 10.0, 7.0}, 3e9, max_dbm, kPi, beams_per_poa, beam));
  // 5 GHz PoAs evenly spaced along one long wall, facing into the hall. Facing pairs on
  // opposite walls put each other's users in their main lobes.
  for (int i = 0; i < 6; ++i) {
    s.poas.push_back(make_poa(3 + i, {80.0 * (2 * i + 1) / 12.0, 0.5, 6.0}, 5e9, max_dbm, kPi / 2,
                              beams_per_poa, beam));
  }
  PlacementSpec pl;
  pl.n_users = users;
  pl.n_humans = humans;
  pl.n_linked_humans = std::min(users, humans / 2);
  pl.user_height_m = 1.5;
  pl.human_height_m = 1.5;
  pl.required_rate_bps = 100e6;
  pl.phantom_pool = {"Ella", "Duke"};
  s.placement = pl;
  return s;
}

Scenario umi_sc_template(int users, int humans, int beams_per_poa) {
  Scenario s;
  s.kind = ScenarioKind::UmiSc;
  s.bounds = {800.0, 40.0, 30.0};
  s.clutter = {0.0, 0.0};
  s.sar_limit_wkg = kIcnirpWholeBodyLimit;
  s.min_poa_user_distance_m = 10.0;
  s.channel = ChannelParams::defaults(ScenarioKind::UmiSc);
  s.frequency_map = default_frequency_map();
  s.phantoms = default_phantoms();
  const double max_dbm = 33.0;
  int beam = 0;
  // 3.5 GHz PoAs on the two ends of the road stretch.
  s.poas.push_back(make_poa(1, {0.0, 20.0, 10.0}, 3.5e9, max_dbm, 0.0, beams_per_poa, beam));
  s.poas.push_back(make_poa(2, {800.0, 20.0, 10.0}, 3.5e9, max_dbm, kPi, beams_per_poa, beam));
  // 5.2 GHz PoAs evenly spaced along one side of the street.
  for (int i = 0; i < 6; ++i) {
    s.poas.push_back(make_poa(3 + i, {800.0 * (2 * i + 1) / 12.0, 0.0, 10.0}, 5.2e9, max_dbm,
                              kPi / 2, beams_per_poa, beam));
  }
  PlacementSpec pl;
  pl.n_users = users;
  pl.n_humans = humans;
  pl.n_linked_humans = std::min(users, humans / 2);
  pl.user_height_m = 1.5;
  pl.human_height_m = 1.5;
  pl.required_rate_bps = 100e6;
  pl.phantom_pool = {"Ella", "Duke", "Billie", "Thelonious"};
  s.placement = pl;
  return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"inf-dh-default", "umi-sc-default", "inf-dh-desk", "umi-sc-desk"};
}

bool is_builtin(std::string_view name) {
  const auto names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario builtin_template(std::string_view name) {
  Scenario s;
  if (name == "inf-dh-default") {
    s = inf_dh_template(100, 200, 16);
  } else if (name == "umi-sc-default") {
    s = umi_sc_template(100, 200, 16);
  } else if (name == "inf-dh-desk") {
    s = inf_dh_template(20, 40, 8);
  } else if (name == "umi-sc-desk") {
    s = umi_sc_template(20, 40, 8);
  } else {
    throw std::invalid_argument("unknown built-in scenario '" + std::string(name) + "'");
  }
  s.name = std::string(name);
  validate_scenario(s);
  return s;
}

Scenario builtin_scenario(std::string_view name, std::uint64_t seed) {
  return generate_placements(builtin_template(name), seed);
}

}  // namespace cellless
