#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cellless/antenna.hpp"
#include "cellless/channel.hpp"
#include "cellless/exposure.hpp"
#include "cellless/geometry.hpp"

namespace cellless {

inline constexpr int kScenarioSchemaVersion = 1;

struct Bounds {
  double length = 0.0;  // x extent, m
  double width = 0.0;   // y extent, m
  double height = 0.0;  // z extent, m

  bool operator==(const Bounds&) const = default;
};

struct ClutterSpec {
  double density = 0.0;  // fraction of floor space, [0, 1)
  double height_m = 0.0;

  bool operator==(const ClutterSpec&) const = default;
};

/// Point of access. A dual-band site is modelled as two PoAs sharing a
/// position.
struct PoA {
  int id = 0;
  Position3D position;
  double frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
  double max_tx_power_dbm = 0.0;
  double min_beam_width = 0.0;  // radians
  PanelGeometry panel;
  std::vector<int> beams;

  bool operator==(const PoA&) const = default;
};

struct EndUser {
  int id = 0;
  Position3D position;
  double required_rate_bps = 0.0;

  bool operator==(const EndUser&) const = default;
};

struct Human {
  int id = 0;
  Position3D position;
  std::string phantom;
  std::optional<int> linked_user;

  bool operator==(const Human&) const = default;
};

/// Entity counts used by generate_placements. Positions are drawn
/// uniformly within the bounds at fixed per-class heights.
struct PlacementSpec {
  int n_users = 0;
  int n_humans = 0;
  int n_linked_humans = 0;  // humans carrying users' terminals
  double user_height_m = 1.5;
  double human_height_m = 1.5;
  double required_rate_bps = 100e6;
  std::vector<std::string> phantom_pool;
  int max_attempts = 10000;

  bool operator==(const PlacementSpec&) const = default;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  ScenarioKind kind = ScenarioKind::InfDh;
  Bounds bounds;
  ClutterSpec clutter;
  double sar_limit_wkg = kIcnirpWholeBodyLimit;
  double min_poa_user_distance_m = 0.0;
  std::vector<PoA> poas;
  std::vector<EndUser> users;
  std::vector<Human> humans;
  std::vector<PhantomProfile> phantoms;
  FrequencyMap frequency_map;
  ChannelParams channel;
  std::optional<PlacementSpec> placement;

  bool operator==(const Scenario&) const = default;

  PropagationSite site() const { return {kind, clutter.density, clutter.height_m}; }

  // Lookups throw std::out_of_range on unknown ids.
  std::size_t poa_index(int poa_id) const;
  std::size_t user_index(int user_id) const;
  const PoA& poa(int poa_id) const { return poas[poa_index(poa_id)]; }
  const EndUser& user(int user_id) const { return users[user_index(user_id)]; }
  const PhantomProfile& phantom(std::string_view name) const;
  int beam_owner(int beam_id) const;
  std::vector<int> all_beams() const;
};

std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view s);

/// Checks every invariant; throws ValidationError naming the field.
void validate_scenario(const Scenario& scenario);

/// Draws user and human positions from `seed`. Deterministic.
Scenario generate_placements(const Scenario& scenario_template, std::uint64_t seed);

/// Built-in templates: inf-dh-default, umi-sc-default, inf-dh-desk,
/// umi-sc-desk. They carry PoAs and a PlacementSpec but no entities.
std::vector<std::string> builtin_names();
bool is_builtin(std::string_view name);
Scenario builtin_template(std::string_view name);
Scenario builtin_scenario(std::string_view name, std::uint64_t seed);

/// JSON scenario file I/O (see README for the schema).
Scenario parse_scenario(const std::string& text);
std::string scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace cellless
