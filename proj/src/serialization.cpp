#include "cellless/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "cellless/errors.hpp"

namespace cellless {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json position_json(const Position3D& p) { return ordered_json::array({p.x, p.y, p.z}); }

Position3D position_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("position must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json power_json(double dbm) {
  if (std::isinf(dbm) && dbm < 0) return nullptr;
  return dbm;
}

double power_from(const json& j) {
  if (j.is_null()) return -std::numeric_limits<double>::infinity();
  return j.get<double>();
}

std::string_view element_name(ElementPattern e) {
  return e == ElementPattern::ThreeGpp8dBi ? "3gpp-8dbi" : "isotropic";
}

ElementPattern element_from(const std::string& s) {
  if (s == "3gpp-8dbi") return ElementPattern::ThreeGpp8dBi;
  if (s == "isotropic") return ElementPattern::Isotropic;
  throw ParseError("unknown element pattern '" + s + "'");
}

ordered_json coeffs_json(const PathlossCoeffs& c) { return {{"a", c.a}, {"b", c.b}, {"c", c.c}}; }

PathlossCoeffs coeffs_from(const json& j) {
  return {j.at("a").get<double>(), j.at("b").get<double>(), j.at("c").get<double>()};
}

ordered_json channel_json(const ChannelParams& c) {
  return {
      {"n_clusters", c.n_clusters},
      {"n_rays", c.n_rays},
      {"delay_spread_s", c.delay_spread_s},
      {"azimuth_spread_dep_deg", rad_to_deg(c.azimuth_spread_dep)},
      {"azimuth_spread_arr_deg", rad_to_deg(c.azimuth_spread_arr)},
      {"zenith_spread_dep_deg", rad_to_deg(c.zenith_spread_dep)},
      {"zenith_spread_arr_deg", rad_to_deg(c.zenith_spread_arr)},
      {"ray_spread_azimuth_deg", rad_to_deg(c.ray_spread_azimuth)},
      {"ray_spread_zenith_deg", rad_to_deg(c.ray_spread_zenith)},
      {"shadow_sigma_los_db", c.shadow_sigma_los_db},
      {"shadow_sigma_nlos_db", c.shadow_sigma_nlos_db},
      {"rician_k_mean_db", c.rician_k_mean_db},
      {"rician_k_sigma_db", c.rician_k_sigma_db},
      {"pathloss_los", coeffs_json(c.pathloss_los)},
      {"pathloss_nlos", coeffs_json(c.pathloss_nlos)},
      {"los_model",
       {{"clutter_size_m", c.los_model.clutter_size_m},
        {"umi_d1_m", c.los_model.umi_d1_m},
        {"umi_d2_m", c.los_model.umi_d2_m}}},
  };
}

// Missing keys keep the scenario-kind defaults.
ChannelParams channel_from(const json& j, ScenarioKind kind) {
  ChannelParams c = ChannelParams::defaults(kind);
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
  };
  auto angle = [&](const char* key, double& out) {
    if (j.contains(key)) out = deg_to_rad(j.at(key).get<double>());
  };
  if (j.contains("n_clusters")) c.n_clusters = j.at("n_clusters").get<int>();
  if (j.contains("n_rays")) c.n_rays = j.at("n_rays").get<int>();
  num("delay_spread_s", c.delay_spread_s);
  angle("azimuth_spread_dep_deg", c.azimuth_spread_dep);
  angle("azimuth_spread_arr_deg", c.azimuth_spread_arr);
  angle("zenith_spread_dep_deg", c.zenith_spread_dep);
  angle("zenith_spread_arr_deg", c.zenith_spread_arr);
  angle("ray_spread_azimuth_deg", c.ray_spread_azimuth);
  angle("ray_spread_zenith_deg", c.ray_spread_zenith);
  num("shadow_sigma_los_db", c.shadow_sigma_los_db);
  num("shadow_sigma_nlos_db", c.shadow_sigma_nlos_db);
  num("rician_k_mean_db", c.rician_k_mean_db);
  num("rician_k_sigma_db", c.rician_k_sigma_db);
  if (j.contains("pathloss_los")) c.pathloss_los = coeffs_from(j.at("pathloss_los"));
  if (j.contains("pathloss_nlos")) c.pathloss_nlos = coeffs_from(j.at("pathloss_nlos"));
  if (j.contains("los_model")) {
    const auto& l = j.at("los_model");
    if (l.contains("clutter_size_m")) c.los_model.clutter_size_m = l.at("clutter_size_m").get<double>();
    if (l.contains("umi_d1_m")) c.los_model.umi_d1_m = l.at("umi_d1_m").get<double>();
    if (l.contains("umi_d2_m")) c.los_model.umi_d2_m = l.at("umi_d2_m").get<double>();
  }
  return c;
}

ordered_json phantom_json(const PhantomProfile& p) {
  ordered_json refs = ordered_json::array();
  for (const auto& [f, sar] : p.sar_ref) refs.push_back({{"frequency_hz", f}, {"sar_wkg", sar}});
  ordered_json j = {{"name", p.name},     {"bmi", p.bmi},   {"bmi_ref", p.bmi_ref},
                    {"e_ref_vpm", p.e_ref_vpm}, {"sar_ref", refs}};
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

PhantomProfile phantom_from(const json& j) {
  PhantomProfile p;
  p.name = j.at("name").get<std::string>();
  p.bmi = j.at("bmi").get<double>();
  p.bmi_ref = j.value("bmi_ref", kDefaultReferenceBmi);
  p.e_ref_vpm = j.value("e_ref_vpm", kDefaultReferenceField);
  for (const auto& r : j.at("sar_ref")) {
    p.sar_ref[r.at("frequency_hz").get<double>()] = r.at("sar_wkg").get<double>();
  }
  p.note = j.value("note", std::string{});
  return p;
}

ordered_json placement_json(const PlacementSpec& p) {
  return {{"n_users", p.n_users},
          {"n_humans", p.n_humans},
          {"n_linked_humans", p.n_linked_humans},
          {"user_height_m", p.user_height_m},
          {"human_height_m", p.human_height_m},
          {"required_rate_bps", p.required_rate_bps},
          {"phantom_pool", p.phantom_pool},
          {"max_attempts", p.max_attempts}};
}

PlacementSpec placement_from(const json& j) {
  PlacementSpec p;
  p.n_users = j.at("n_users").get<int>();
  p.n_humans = j.at("n_humans").get<int>();
  p.n_linked_humans = j.value("n_linked_humans", 0);
  p.user_height_m = j.value("user_height_m", p.user_height_m);
  p.human_height_m = j.value("human_height_m", p.human_height_m);
  p.required_rate_bps = j.value("required_rate_bps", p.required_rate_bps);
  p.phantom_pool = j.value("phantom_pool", std::vector<std::string>{});
  p.max_attempts = j.value("max_attempts", p.max_attempts);
  return p;
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");

  Scenario s;
  with_path("schema_version", [&] { s.schema_version = j.at("schema_version").get<int>(); });
  if (s.schema_version != kScenarioSchemaVersion) {
    throw ValidationError("schema_version",
                          "unsupported version " + std::to_string(s.schema_version));
  }
  s.name = j.value("name", std::string{});
  with_path("kind", [&] {
    try {
      s.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  });
  with_path("bounds_m", [&] {
    const auto& b = j.at("bounds_m");
    if (!b.is_array() || b.size() != 3) throw ParseError("expected [length, width, height]");
    s.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>()};
  });
  with_path("clutter", [&] {
    if (!j.contains("clutter")) return;
    s.clutter = {j["clutter"].at("density").get<double>(), j["clutter"].at("height_m").get<double>()};
  });
  with_path("limits", [&] {
    if (!j.contains("limits")) return;
    const auto& l = j["limits"];
    s.sar_limit_wkg = l.value("sar_wkg", kIcnirpWholeBodyLimit);
    s.min_poa_user_distance_m = l.value("min_poa_user_distance_m", 0.0);
  });

  const auto& poas = j.contains("poas") ? j["poas"] : json::array();
  for (std::size_t i = 0; i < poas.size(); ++i) {
    with_path("poas[" + std::to_string(i) + "]", [&] {
      const auto& pj = poas[i];
      PoA p;
      p.id = pj.at("id").get<int>();
      p.position = position_from(pj.at("position_m"));
      p.frequency_hz = pj.at("frequency_hz").get<double>();
      p.bandwidth_hz = pj.at("bandwidth_hz").get<double>();
      p.max_tx_power_dbm = pj.at("max_tx_power_dbm").get<double>();
      const auto& panel = pj.at("panel");
      p.panel.rows = panel.at("rows").get<int>();
      p.panel.cols = panel.at("cols").get<int>();
      p.panel.v_spacing = panel.value("v_spacing", 0.5);
      p.panel.h_spacing = panel.value("h_spacing", 0.5);
      p.panel.mechanical_azimuth = deg_to_rad(panel.value("mechanical_azimuth_deg", 0.0));
      p.panel.element = element_from(panel.value("element", std::string("isotropic")));
      p.min_beam_width = pj.contains("min_beam_width_deg")
                             ? deg_to_rad(pj.at("min_beam_width_deg").get<double>())
                             : kBeamwidthConstant / p.panel.cols;
      p.beams = pj.at("beams").get<std::vector<int>>();
      s.poas.push_back(std::move(p));
    });
  }
  const auto& users = j.contains("users") ? j["users"] : json::array();
  for (std::size_t i = 0; i < users.size(); ++i) {
    with_path("users[" + std::to_string(i) + "]", [&] {
      const auto& uj = users[i];
      s.users.push_back({uj.at("id").get<int>(), position_from(uj.at("position_m")),
                         uj.at("required_rate_bps").get<double>()});
    });
  }
  const auto& humans = j.contains("humans") ? j["humans"] : json::array();
  for (std::size_t i = 0; i < humans.size(); ++i) {
    with_path("humans[" + std::to_string(i) + "]", [&] {
      const auto& hj = humans[i];
      Human h;
      h.id = hj.at("id").get<int>();
      h.position = position_from(hj.at("position_m"));
      h.phantom = hj.at("phantom").get<std::string>();
      if (hj.contains("linked_user") && !hj["linked_user"].is_null()) {
        h.linked_user = hj["linked_user"].get<int>();
      }
      s.humans.push_back(std::move(h));
    });
  }
  with_path("phantoms", [&] {
    if (!j.contains("phantoms")) {
      s.phantoms = default_phantoms();
      return;
    }
    for (const auto& pj : j["phantoms"]) s.phantoms.push_back(phantom_from(pj));
  });
  with_path("frequency_map", [&] {
    if (!j.contains("frequency_map")) {
      s.frequency_map = default_frequency_map();
      return;
    }
    for (const auto& m : j["frequency_map"]) {
      s.frequency_map.pairs[m.at("frequency_hz").get<double>()] = m.at("reference_hz").get<double>();
    }
  });
  with_path("channel_params", [&] {
    s.channel = channel_from(j.contains("channel_params") ? j["channel_params"] : json::object(),
                             s.kind);
  });
  with_path("placement", [&] {
    if (j.contains("placement") && !j["placement"].is_null()) {
      s.placement = placement_from(j["placement"]);
    }
  });
  validate_scenario(s);
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  j["kind"] = std::string(to_string(s.kind));
  j["bounds_m"] = {s.bounds.length, s.bounds.width, s.bounds.height};
  j["clutter"] = {{"density", s.clutter.density}, {"height_m", s.clutter.height_m}};
  j["limits"] = {{"sar_wkg", s.sar_limit_wkg},
                 {"min_poa_user_distance_m", s.min_poa_user_distance_m}};
  j["poas"] = ordered_json::array();
  for (const auto& p : s.poas) {
    j["poas"].push_back({
        {"id", p.id},
        {"position_m", position_json(p.position)},
        {"frequency_hz", p.frequency_hz},
        {"bandwidth_hz", p.bandwidth_hz},
        {"max_tx_power_dbm", p.max_tx_power_dbm},
        {"min_beam_width_deg", rad_to_deg(p.min_beam_width)},
        {"panel",
         {{"rows", p.panel.rows},
          {"cols", p.panel.cols},
          {"v_spacing", p.panel.v_spacing},
          {"h_spacing", p.panel.h_spacing},
          {"mechanical_azimuth_deg", rad_to_deg(p.panel.mechanical_azimuth)},
          {"element", std::string(element_name(p.panel.element))}}},
        {"beams", p.beams},
    });
  }
  j["users"] = ordered_json::array();
  for (const auto& u : s.users) {
    j["users"].push_back({{"id", u.id},
                          {"position_m", position_json(u.position)},
                          {"required_rate_bps", u.required_rate_bps}});
  }
  j["humans"] = ordered_json::array();
  for (const auto& h : s.humans) {
    ordered_json hj = {{"id", h.id}, {"position_m", position_json(h.position)}, {"phantom", h.phantom}};
    if (h.linked_user) hj["linked_user"] = *h.linked_user;
    j["humans"].push_back(hj);
  }
  j["phantoms"] = ordered_json::array();
  for (const auto& p : s.phantoms) j["phantoms"].push_back(phantom_json(p));
  j["frequency_map"] = ordered_json::array();
  for (const auto& [f, r] : s.frequency_map.pairs) {
    j["frequency_map"].push_back({{"frequency_hz", f}, {"reference_hz", r}});
  }
  j["channel_params"] = channel_json(s.channel);
  if (s.placement) j["placement"] = placement_json(*s.placement);
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scenario_to_json(scenario);
}

std::string solution_to_json(const SolutionState& solution) {
  ordered_json j;
  j["beams"] = ordered_json::array();
  for (const auto& b : solution.beams) {
    j["beams"].push_back({{"beam_id", b.beam_id},
                          {"owner_poa", b.owner_poa},
                          {"azimuth_deg", rad_to_deg(b.azimuth)},
                          {"zenith_deg", rad_to_deg(b.zenith)},
                          {"width_deg", rad_to_deg(b.width)},
                          {"served_users", b.served_users}});
  }
  j["tx_power_dbm"] = ordered_json::array();
  for (const auto& [id, dbm] : solution.tx_power_dbm) {
    j["tx_power_dbm"].push_back({{"poa", id}, {"dbm", power_json(dbm)}});
  }
  return j.dump(2) + "\n";
}

SolutionState parse_solution(const std::string& text) {
  try {
    const json j = json::parse(text);
    SolutionState s;
    for (const auto& bj : j.at("beams")) {
      BeamConfig b;
      b.beam_id = bj.at("beam_id").get<int>();
      b.owner_poa = bj.at("owner_poa").get<int>();
      b.azimuth = deg_to_rad(bj.at("azimuth_deg").get<double>());
      b.zenith = deg_to_rad(bj.at("zenith_deg").get<double>());
      b.width = deg_to_rad(bj.at("width_deg").get<double>());
      b.served_users = bj.at("served_users").get<std::vector<int>>();
      s.beams.push_back(std::move(b));
    }
    for (const auto& pj : j.at("tx_power_dbm")) {
      s.tx_power_dbm[pj.at("poa").get<int>()] = power_from(pj.at("dbm"));
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed solution: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string metrics_to_csv(const MetricsBundle& m, const Scenario& scenario) {
  std::string out = "entity,id,x,y,phantom,rate_bps,sar_wkg\n";
  for (std::size_t i = 0; i < m.user_ids.size(); ++i) {
    const auto& u = scenario.user(m.user_ids[i]);
    out += "user," + std::to_string(u.id) + "," + format_double(u.position.x) + "," +
           format_double(u.position.y) + ",," + format_double(m.user_rate_bps[i]) + ",\n";
  }
  for (std::size_t i = 0; i < m.human_ids.size(); ++i) {
    const auto& h = scenario.humans[i];
    out += "human," + std::to_string(h.id) + "," + format_double(h.position.x) + "," +
           format_double(h.position.y) + "," + h.phantom + ",," +
           format_double(m.human_sar_wkg[i]) + "\n";
  }
  return out;
}

std::string summary_to_json(const MetricsBundle& m, const std::string& scenario_name,
                            std::uint64_t seed, const std::string& solver) {
  ordered_json j;
  j["scenario"] = scenario_name;
  j["seed"] = seed;
  j["solver"] = solver;
  j["feasible"] = m.feasible;
  j["total_power_w"] = m.total_power_w;
  j["min_rate_bps"] = m.user_rate_bps.empty() ? ordered_json(nullptr) : ordered_json(m.min_rate());
  j["max_sar_wkg"] = m.max_sar();
  j["poa_power_dbm"] = ordered_json::array();
  for (const auto& [id, dbm] : m.poa_power_dbm) {
    j["poa_power_dbm"].push_back({{"poa", id}, {"dbm", power_json(dbm)}});
  }
  j["violated"] = m.violated;
  return j.dump(2) + "\n";
}

MetricsBundle parse_metrics(const std::string& metrics_csv, const std::string& summary_json) {
  MetricsBundle m;
  std::istringstream in(metrics_csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    if (cols.size() != 7) throw ParseError("metrics.csv: bad row '" + line + "'");
    if (cols[0] == "user") {
      m.user_ids.push_back(std::stoi(cols[1]));
      m.user_rate_bps.push_back(std::stod(cols[5]));
    } else if (cols[0] == "human") {
      m.human_ids.push_back(std::stoi(cols[1]));
      m.human_sar_wkg.push_back(std::stod(cols[6]));
    } else {
      throw ParseError("metrics.csv: unknown entity '" + cols[0] + "'");
    }
  }
  try {
    const json j = json::parse(summary_json);
    m.feasible = j.at("feasible").get<bool>();
    m.total_power_w = j.at("total_power_w").get<double>();
    for (const auto& p : j.at("poa_power_dbm")) {
      m.poa_power_dbm[p.at("poa").get<int>()] = power_from(p.at("dbm"));
    }
    m.violated = j.at("violated").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed summary: ") + e.what());
  }
  return m;
}

std::string links_to_json(const Evaluator& ev) {
  const auto& s = ev.scenario();
  ordered_json out = ordered_json::array();
  for (int r = 0; r < ev.config().n_realizations; ++r) {
    for (std::size_t p = 0; p < s.poas.size(); ++p) {
      for (int t = 0; t < ev.n_targets(); ++t) {
        const auto l = ev.link(r, p, t);
        ordered_json delays = ordered_json::array();
        ordered_json powers = ordered_json::array();
        for (const auto& c : l.clusters) {
          delays.push_back(c.delay_s);
          powers.push_back(c.power);
        }
        out.push_back({{"realization", r},
                       {"poa", s.poas[p].id},
                       {"target", t},
                       {"los", l.los},
                       {"distance_3d_m", l.distance_3d},
                       {"pathloss_db", l.pathloss_db},
                       {"shadow_db", l.shadow_db},
                       {"rician_k", l.rician_k},
                       {"cluster_delays_s", delays},
                       {"cluster_powers", powers}});
      }
    }
  }
  return out.dump(1) + "\n";
}

}  // namespace cellless
