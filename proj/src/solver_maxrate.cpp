#include "cellless/solver_maxrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cellless/errors.hpp"
#include "cellless/parallel.hpp"
#include "cellless/solver_ctm.hpp"

namespace cellless {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t pick(RandomStream& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

double signed_step(RandomStream& rng, double step) { return rng.uniform() < 0.5 ? -step : step; }

}  // namespace

double objective(const MetricsBundle& metrics) {
  if (metrics.user_rate_bps.empty()) return std::numeric_limits<double>::infinity();
  return metrics.min_rate();
}

double objective(const SolutionState& solution, const Scenario& scenario, std::uint64_t seed,
                 int n_realizations) {
  try {
    return objective(evaluate(solution, scenario, seed, n_realizations));
  } catch (const UnservedUser&) {
    return kNegInf;
  }
}

SolutionState neighbor(const SolutionState& solution, const Scenario& scenario,
                       const AnnealConfig& config, RandomStream& rng) {
  SolutionState out = solution;
  if (out.beams.empty()) return out;
  const double weights[] = {1.0, 1.0, 1.0, std::max(0.0, config.reassign_weight)};
  const double total = weights[0] + weights[1] + weights[2] + weights[3];
  double u = rng.uniform() * total;
  int kind = 0;
  while (kind < 3 && u >= weights[kind]) u -= weights[kind++];

  switch (kind) {
    case 0: {  // power of one PoA
      if (out.tx_power_dbm.empty()) break;
      auto it = std::next(out.tx_power_dbm.begin(), static_cast<long>(pick(rng, out.tx_power_dbm.size())));
      const double max_dbm = scenario.poa(it->first).max_tx_power_dbm;
      if (std::isfinite(it->second)) {
        it->second = std::min(max_dbm, it->second + signed_step(rng, config.power_step_db));
      }
      break;
    }
    case 1: {  // steering of one beam
      auto& b = out.beams[pick(rng, out.beams.size())];
      if (rng.uniform() < 0.5) {
        b.azimuth = wrap_angle(b.azimuth + signed_step(rng, config.angle_step));
      } else {
        b.zenith = std::clamp(b.zenith + signed_step(rng, config.angle_step), 0.0, kPi);
      }
      break;
    }
    case 2: {  // width of one beam
      auto& b = out.beams[pick(rng, out.beams.size())];
      const double lo = scenario.poa(b.owner_poa).min_beam_width;
      b.width = std::clamp(b.width + signed_step(rng, config.width_step), lo, std::max(lo, kPi));
      break;
    }
    default: {  // move one user to another beam
      if (scenario.users.empty() || out.beams.size() < 2) break;
      const int user = scenario.users[pick(rng, scenario.users.size())].id;
      auto from = std::find_if(out.beams.begin(), out.beams.end(), [&](const BeamConfig& b) {
        return std::binary_search(b.served_users.begin(), b.served_users.end(), user);
      });
      std::size_t to = pick(rng, out.beams.size() - 1);
      const auto from_index = static_cast<std::size_t>(from - out.beams.begin());
      if (from != out.beams.end() && to >= from_index) ++to;
      if (from != out.beams.end()) {
        std::erase(from->served_users, user);
      }
      auto& dst = out.beams[to].served_users;
      dst.insert(std::upper_bound(dst.begin(), dst.end(), user), user);
      break;
    }
  }
  return out;
}

SolutionState maxrate_initial_state(const Scenario& scenario, std::uint64_t seed) {
  CtmConfig c;
  c.seed = seed;
  SolutionState s = ctm_geometry(scenario, c);
  for (const auto& p : scenario.poas) s.tx_power_dbm[p.id] = p.max_tx_power_dbm;
  return s;
}

namespace {

struct Candidate {
  SolutionState state;
  FieldTable table;
  MetricsBundle metrics;
  double value = kNegInf;
};

class Annealer {
 public:
  Annealer(const Scenario& scenario, const AnnealConfig& config)
      : scenario_(scenario),
        config_(config),
        ev_(scenario, {config.seed, config.n_realizations, config.workers}) {}

  Candidate score(SolutionState state, const FieldTable* reuse) const {
    Candidate c;
    c.table = ev_.fields(state, reuse);
    try {
      c.metrics = ev_.metrics(state, c.table);
      c.value = objective(c.metrics);
    } catch (const UnservedUser&) {
      c.value = kNegInf;
    }
    c.state = std::move(state);
    return c;
  }

  // Draws `parallel_candidates` neighbours in sequence, scores them
  // concurrently and keeps the best (lowest index on ties).
  Candidate propose(const Candidate& current, RandomStream& rng) {
    const int n = std::max(1, config_.parallel_candidates);
    std::vector<SolutionState> states;
    for (int i = 0; i < n; ++i) states.push_back(neighbor(current.state, scenario_, config_, rng));
    std::vector<Candidate> scored(n);
    parallel_for(static_cast<std::size_t>(n), config_.workers, [&](std::size_t i) {
      scored[i] = score(std::move(states[i]), &current.table);
    });
    evaluations_ += n;
    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i) {
      if (better(scored[i].value, scored[best].value)) best = i;
    }
    return std::move(scored[best]);
  }

  static bool better(double a, double b) { return a > b || (std::isnan(b) && !std::isnan(a)); }

  long evaluations() const { return evaluations_; }

 private:
  const Scenario& scenario_;
  const AnnealConfig& config_;
  Evaluator ev_;
  long evaluations_ = 0;
};

double acceptance(double delta, double temp) {
  if (delta >= 0.0) return 1.0;
  if (!(temp > 0.0) || !std::isfinite(delta)) return 0.0;
  return std::exp(delta / temp);
}

}  // namespace

MaxRateResult solve_maxrate(const Scenario& scenario, const AnnealConfig& config) {
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(config.cooling_factor > 0.0 && config.cooling_factor < 1.0)) {
    throw std::invalid_argument("cooling_factor must lie in (0, 1)");
  }
  Annealer annealer(scenario, config);
  RandomStream rng(stream_key({config.seed, 0x616e6e65616cULL}));
  Candidate current = annealer.score(maxrate_initial_state(scenario, config.seed), nullptr);

  MaxRateResult result;
  double temp = config.initial_temp;
  if (!(temp > 0.0)) {
    // Probe moves from the initial state: pick T0 so that the mean
    // worsening step is accepted with the target probability.
    RandomStream probe_rng(stream_key({config.seed, 0x70726f6265ULL}));
    double sum = 0.0;
    int worse = 0;
    for (int i = 0; i < config.calibration_probes; ++i) {
      const auto c = annealer.score(neighbor(current.state, scenario, config, probe_rng),
                                    &current.table);
      const double d = c.value - current.value;
      if (d < 0.0 && std::isfinite(d)) {
        sum += -d;
        ++worse;
      }
    }
    temp = worse > 0 ? (sum / worse) / -std::log(config.calibration_acceptance) : 1e6;
  }
  result.initial_temp = temp;

  Candidate best = current;
  const long total_moves = static_cast<long>(config.iterations) * config.moves_per_temp;
  const long late_from = total_moves - total_moves / 10;
  long move = 0;
  for (int step = 0; step < config.iterations; ++step) {
    for (int m = 0; m < config.moves_per_temp; ++m, ++move) {
      Candidate cand = annealer.propose(current, rng);
      const double delta = cand.value - current.value;
      const bool worse = delta < 0.0 || (std::isinf(cand.value) && !std::isinf(current.value));
      const bool accept = rng.uniform() < acceptance(delta, temp);
      if (move >= late_from && worse) {
        ++result.late_worse_proposed;
        if (accept) ++result.late_worse_accepted;
      }
      if (accept) {
        current = std::move(cand);
        if (Annealer::better(current.value, best.value)) best = current;
      }
    }
    result.best_history.push_back(best.value);
    temp *= config.cooling_factor;
  }

  result.solution = best.state;
  result.metrics = best.value == kNegInf
                       ? MetricsBundle{}
                       : best.metrics;
  if (best.value == kNegInf) {
    result.metrics.feasible = false;
    result.metrics.violated.push_back("unserved");
  }
  result.evaluations = annealer.evaluations();
  return result;
}

}  // namespace cellless
