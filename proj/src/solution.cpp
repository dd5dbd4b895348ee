#include "cellless/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace cellless {

const BeamConfig* SolutionState::serving_beam(int user_id) const {
  for (const auto& b : beams) {
    if (std::binary_search(b.served_users.begin(), b.served_users.end(), user_id)) return &b;
  }
  return nullptr;
}

bool poa_active(const SolutionState& solution, int poa_id) {
  return std::any_of(solution.beams.begin(), solution.beams.end(),
                     [&](const BeamConfig& b) { return b.owner_poa == poa_id && b.active(); });
}

double effective_power_dbm(const SolutionState& solution, int poa_id) {
  if (!poa_active(solution, poa_id)) return -std::numeric_limits<double>::infinity();
  auto it = solution.tx_power_dbm.find(poa_id);
  return it == solution.tx_power_dbm.end() ? -std::numeric_limits<double>::infinity() : it->second;
}

std::vector<Violation> validate(const SolutionState& solution, const Scenario& scenario) {
  std::vector<Violation> out;
  auto add = [&](std::string var, std::string msg) {
    out.push_back({std::move(var), std::move(msg)});
  };

  std::set<int> known_users;
  for (const auto& u : scenario.users) known_users.insert(u.id);
  std::set<int> known_beams;
  for (int b : scenario.all_beams()) known_beams.insert(b);

  std::map<int, int> serve_count;
  std::set<int> seen_beams;
  for (const auto& b : solution.beams) {
    const std::string tag = "beam[" + std::to_string(b.beam_id) + "]";
    if (!known_beams.count(b.beam_id)) {
      add(tag, "beam id not defined by the scenario");
      continue;
    }
    if (!seen_beams.insert(b.beam_id).second) add(tag, "beam listed twice");
    const int owner = scenario.beam_owner(b.beam_id);
    if (b.owner_poa != owner) {
      add(tag + ".owner_poa", "beam belongs to PoA " + std::to_string(owner));
    }
    const PoA& poa = scenario.poa(owner);
    if (!(b.width >= poa.min_beam_width)) {
      add(tag + ".width", "width below the PoA minimum beamwidth");
    }
    if (!(b.width <= kTwoPi)) add(tag + ".width", "width exceeds a full turn");
    if (!(b.azimuth >= -kPi && b.azimuth <= kPi)) add(tag + ".azimuth", "outside [-pi, pi]");
    if (!(b.zenith >= 0.0 && b.zenith <= kPi)) add(tag + ".zenith", "outside [0, pi]");
    if (!std::is_sorted(b.served_users.begin(), b.served_users.end())) {
      add(tag + ".served_users", "not sorted");
    }
    for (int u : b.served_users) {
      if (!known_users.count(u)) {
        add(tag + ".served_users", "unknown user " + std::to_string(u));
      } else {
        ++serve_count[u];
      }
    }
  }

  for (const auto& u : scenario.users) {
    const int n = serve_count.count(u.id) ? serve_count[u.id] : 0;
    const std::string tag = "user[" + std::to_string(u.id) + "]";
    if (n == 0) add(tag, "unserved user");
    if (n > 1) add(tag, "served by " + std::to_string(n) + " beams");
  }

  for (const auto& [poa_id, dbm] : solution.tx_power_dbm) {
    const std::string tag = "tx_power[" + std::to_string(poa_id) + "]";
    try {
      const PoA& poa = scenario.poa(poa_id);
      if (std::isnan(dbm) || dbm > poa.max_tx_power_dbm) add(tag, "outside [0 W, max_tx_power]");
    } catch (const std::out_of_range&) {
      add(tag, "unknown PoA");
    }
  }
  for (const auto& p : scenario.poas) {
    if (!solution.tx_power_dbm.count(p.id)) {
      add("tx_power[" + std::to_string(p.id) + "]", "missing power for PoA");
    }
  }
  return out;
}

}  // namespace cellless
