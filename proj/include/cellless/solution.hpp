#pragma once

#include <map>
#include <string>
#include <vector>

#include "cellless/scenario.hpp"

namespace cellless {

/// One beam of the decision vector. Angles in radians, GCS.
struct BeamConfig {
  int beam_id = 0;
  int owner_poa = 0;
  double azimuth = 0.0;     // [-pi, pi]
  double zenith = kPi / 2;  // [0, pi]
  double width = 0.0;
  std::vector<int> served_users;  // sorted; empty means the beam is off

  bool operator==(const BeamConfig&) const = default;
  bool active() const noexcept { return !served_users.empty(); }
};

struct SolutionState {
  std::vector<BeamConfig> beams;
  std::map<int, double> tx_power_dbm;  // PoA id -> dBm; -inf is "off"

  bool operator==(const SolutionState&) const = default;

  const BeamConfig* serving_beam(int user_id) const;
};

struct Violation {
  std::string variable;  // e.g. "beam[3].width", "user[7]"
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Structural legality of a decision vector against its scenario. Pure;
/// returns an empty list iff every invariant holds.
std::vector<Violation> validate(const SolutionState& solution, const Scenario& scenario);

/// A PoA is transmitting iff it owns at least one active beam.
bool poa_active(const SolutionState& solution, int poa_id);

/// Effective radiated power: -inf for PoAs without active beams.
double effective_power_dbm(const SolutionState& solution, int poa_id);

std::string solution_to_json(const SolutionState& solution);
SolutionState parse_solution(const std::string& text);

}  // namespace cellless
