#include "cellless/radio_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cellless/errors.hpp"
#include "cellless/exposure.hpp"
#include "cellless/parallel.hpp"

namespace cellless {

double noise_power_w(double bandwidth_hz) {
  return dbm_to_watts(kNoiseDensityDbmPerHz) * bandwidth_hz;
}

double sinr(double signal_w, double noise_w, double interference_w) {
  return signal_w / (noise_w + interference_w);
}

double shannon_rate(double bandwidth_hz, double sinr_linear) {
  return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

double power_density(double frequency_hz, double p_rx_w) {
  const double lambda = wavelength(frequency_hz);
  return p_rx_w * 4.0 * kPi / (lambda * lambda);
}

double MetricsBundle::min_rate() const {
  if (user_rate_bps.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(user_rate_bps.begin(), user_rate_bps.end());
}

double MetricsBundle::max_sar() const {
  if (human_sar_wkg.empty()) return 0.0;
  return *std::max_element(human_sar_wkg.begin(), human_sar_wkg.end());
}

namespace {

constexpr std::uint64_t kUserTag = 1ULL << 32;
constexpr std::uint64_t kHumanTag = 2ULL << 32;

bool same_frequency(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

// Targets receive through a single isotropic element.
SteeredPanel target_panel() { return SteeredPanel(PanelGeometry{}, SteeringDirection{}); }

}  // namespace

struct Evaluator::Prepared {
  std::vector<const BeamField*> serving;               // per user
  std::vector<std::vector<const BeamField*>> active;   // per PoA index
  std::vector<double> power_mw;                        // per PoA index
  std::vector<std::vector<std::size_t>> group_members; // per frequency group
};

Evaluator::Evaluator(const Scenario& scenario, EvaluationConfig config)
    : scenario_(&scenario), config_(config) {
  if (config_.n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
  const auto& s = scenario;
  n_clusters_ = std::max(1, s.channel.n_clusters);

  for (const auto& u : s.users) {
    target_key_.push_back(kUserTag | static_cast<std::uint32_t>(u.id));
    target_position_.push_back(u.position);
  }
  for (const auto& h : s.humans) {
    if (h.linked_user) {
      human_target_.push_back(static_cast<int>(s.user_index(*h.linked_user)));
    } else {
      human_target_.push_back(static_cast<int>(target_key_.size()));
      target_key_.push_back(kHumanTag | static_cast<std::uint32_t>(h.id));
      target_position_.push_back(h.position);
    }
  }
  n_targets_ = static_cast<int>(target_key_.size());

  for (std::size_t p = 0; p < s.poas.size(); ++p) {
    for (int b : s.poas[p].beams) {
      beam_ids_.push_back(b);
      beam_poa_index_.push_back(p);
    }
    int g = -1;
    for (std::size_t k = 0; k < group_frequency_.size(); ++k) {
      if (same_frequency(group_frequency_[k], s.poas[p].frequency_hz)) g = static_cast<int>(k);
    }
    if (g < 0) {
      g = static_cast<int>(group_frequency_.size());
      group_frequency_.push_back(s.poas[p].frequency_hz);
    }
    poa_group_.push_back(g);
  }

  // Delay bins: taps of different links at the same delay add coherently.
  const std::size_t n_poas = s.poas.size();
  const std::size_t per_target = n_poas * n_clusters_;
  const std::size_t slots = static_cast<std::size_t>(config_.n_realizations) * n_targets_;
  bins_.assign(slots * per_target, 0);
  n_bins_.assign(slots, 0);
  const std::size_t rays = static_cast<std::size_t>(std::max(1, s.channel.n_rays));
  const std::size_t link_bytes =
      sizeof(LinkSweep) + n_clusters_ * (2 * sizeof(double) + rays * sizeof(LinkSweep::RayTerm));
  if (slots * n_poas * link_bytes <= kLinkCacheBytes) link_cache_.resize(slots * n_poas);
  const SteeredPanel rx_panel = target_panel();
  parallel_for(slots, config_.workers, [&](std::size_t slot) {
    const int r = static_cast<int>(slot / n_targets_);
    const int t = static_cast<int>(slot % n_targets_);
    std::vector<std::pair<double, std::size_t>> delays;
    delays.reserve(per_target);
    for (std::size_t p = 0; p < n_poas; ++p) {
      const LinkRealization l = link(r, p, t);
      for (int j = 0; j < n_clusters_; ++j) delays.emplace_back(l.clusters[j].delay_s, p * n_clusters_ + j);
      if (!link_cache_.empty()) link_cache_[slot * n_poas + p] = prepare_sweep(l, s.poas[p].panel, rx_panel);
    }
    std::stable_sort(delays.begin(), delays.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::uint32_t bin = 0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
      if (i > 0 && delays[i].first != delays[i - 1].first) ++bin;
      bins_[slot * per_target + delays[i].second] = bin;
    }
    n_bins_[slot] = delays.empty() ? 0 : bin + 1;
  });
}

LinkRealization Evaluator::link(int realization, std::size_t poa_index, int target) const {
  const PoA& poa = scenario_->poas[poa_index];
  RandomStream stream(stream_key({config_.seed, static_cast<std::uint64_t>(realization),
                                  static_cast<std::uint64_t>(static_cast<std::uint32_t>(poa.id)),
                                  target_key_[target]}));
  const LinkGeometry geometry{poa.position, target_position_[target], poa.frequency_hz};
  return sample_link(geometry, scenario_->site(), scenario_->channel, stream);
}

namespace {

PanelGeometry beam_geometry(const PoA& poa, double width) {
  PanelGeometry g = poa.panel;
  g.cols = width_to_panel(width, poa.panel);
  return g;
}

bool same_geometry(const BeamField& f, const BeamConfig& b) {
  return f.azimuth == b.azimuth && f.zenith == b.zenith && f.width == b.width;
}

}  // namespace

FieldTable Evaluator::fields(const SolutionState& solution, const FieldTable* reuse) const {
  const auto& s = *scenario_;
  FieldTable out;
  out.beams.resize(beam_ids_.size());
  std::vector<std::vector<std::pair<std::size_t, const BeamConfig*>>> pending(s.poas.size());

  for (const auto& b : solution.beams) {
    auto it = std::find(beam_ids_.begin(), beam_ids_.end(), b.beam_id);
    if (it == beam_ids_.end()) throw std::invalid_argument("unknown beam " + std::to_string(b.beam_id));
    const auto idx = static_cast<std::size_t>(it - beam_ids_.begin());
    if (reuse && idx < reuse->beams.size() && reuse->beams[idx] &&
        same_geometry(*reuse->beams[idx], b)) {
      out.beams[idx] = reuse->beams[idx];
      continue;
    }
    if (b.active()) pending[beam_poa_index_[idx]].emplace_back(idx, &b);
  }

  const std::size_t per_beam =
      static_cast<std::size_t>(config_.n_realizations) * n_targets_ * n_clusters_;
  const SteeredPanel rx_panel = target_panel();

  for (std::size_t p = 0; p < s.poas.size(); ++p) {
    if (pending[p].empty()) continue;
    const PoA& poa = s.poas[p];
    std::vector<SteeredPanel> panels;
    std::vector<std::shared_ptr<BeamField>> made;
    for (const auto& [idx, cfg] : pending[p]) {
      panels.emplace_back(beam_geometry(poa, cfg->width),
                          to_local(cfg->zenith, cfg->azimuth, poa.panel.mechanical_azimuth));
      auto f = std::make_shared<BeamField>();
      f->beam_id = cfg->beam_id;
      f->azimuth = cfg->azimuth;
      f->zenith = cfg->zenith;
      f->width = cfg->width;
      f->taps.resize(per_beam);
      made.push_back(std::move(f));
    }
    const std::size_t nb = panels.size();
    const std::size_t slots = static_cast<std::size_t>(config_.n_realizations) * n_targets_;
    parallel_for(slots, config_.workers, [&](std::size_t slot) {
      const int r = static_cast<int>(slot / n_targets_);
      const int t = static_cast<int>(slot % n_targets_);
      std::vector<std::complex<double>> buf(nb * n_clusters_);
      if (link_cache_.empty()) {
        link_taps(link(r, p, t), panels, rx_panel, buf);
      } else {
        link_taps(link_cache_[slot * s.poas.size() + p], panels, buf);
      }
      for (std::size_t b = 0; b < nb; ++b) {
        std::copy_n(buf.begin() + b * n_clusters_, n_clusters_,
                    made[b]->taps.begin() + slot * n_clusters_);
      }
    });
    for (std::size_t b = 0; b < nb; ++b) out.beams[pending[p][b].first] = std::move(made[b]);
  }
  return out;
}

Evaluator::Prepared Evaluator::prepare(const SolutionState& solution,
                                       const FieldTable& table) const {
  const auto& s = *scenario_;
  Prepared prep;
  prep.serving.assign(s.users.size(), nullptr);
  prep.active.resize(s.poas.size());
  prep.power_mw.assign(s.poas.size(), 0.0);
  prep.group_members.resize(group_frequency_.size());

  for (const auto& b : solution.beams) {
    if (!b.active()) continue;
    auto it = std::find(beam_ids_.begin(), beam_ids_.end(), b.beam_id);
    if (it == beam_ids_.end()) throw std::invalid_argument("unknown beam " + std::to_string(b.beam_id));
    const auto idx = static_cast<std::size_t>(it - beam_ids_.begin());
    const BeamField* field = idx < table.beams.size() ? table.beams[idx].get() : nullptr;
    if (!field || !same_geometry(*field, b)) {
      throw std::logic_error("field table does not match beam " + std::to_string(b.beam_id));
    }
    prep.active[beam_poa_index_[idx]].push_back(field);
    for (int u : b.served_users) {
      const auto ui = s.user_index(u);
      if (prep.serving[ui]) {
        throw std::invalid_argument("user " + std::to_string(u) + " served by several beams");
      }
      prep.serving[ui] = field;
    }
  }
  for (std::size_t u = 0; u < s.users.size(); ++u) {
    if (!prep.serving[u]) throw UnservedUser(s.users[u].id);
  }
  for (std::size_t p = 0; p < s.poas.size(); ++p) {
    if (!prep.active[p].empty()) {
      prep.power_mw[p] = milliwatts(effective_power_dbm(solution, s.poas[p].id));
    }
    prep.group_members[poa_group_[p]].push_back(p);
  }
  return prep;
}

void Evaluator::realization_pass(const Prepared& prep, int r, RealizationDetail& out) const {
  const auto& s = *scenario_;
  const std::size_t n_poas = s.poas.size();
  const std::size_t nc = n_clusters_;
  const std::size_t per_target = n_poas * nc;
  std::vector<std::complex<double>> scratch;

  // TDM-averaged coherent energy at target t from a set of PoAs: each PoA
  // cycles through its active beams, so bins combine the beam-mean
  // amplitudes coherently and add the per-PoA beam variance.
  auto combined = [&](int t, const std::vector<std::size_t>& members, std::size_t exclude) {
    const std::size_t slot = static_cast<std::size_t>(r) * n_targets_ + t;
    scratch.assign(n_bins_[slot], {});
    double incoherent = 0.0;
    for (std::size_t p : members) {
      if (p == exclude || prep.power_mw[p] == 0.0) continue;
      const auto& beams = prep.active[p];
      const double inv = 1.0 / static_cast<double>(beams.size());
      const double amp = std::sqrt(prep.power_mw[p]);
      for (std::size_t j = 0; j < nc; ++j) {
        std::complex<double> mean{};
        double power = 0.0;
        for (const BeamField* f : beams) {
          const auto a = f->taps[slot * nc + j];
          mean += a;
          power += std::norm(a);
        }
        mean *= inv;
        power *= inv;
        scratch[bins_[slot * per_target + p * nc + j]] += amp * mean;
        incoherent += prep.power_mw[p] * std::max(0.0, power - std::norm(mean));
      }
    }
    double e = incoherent;
    for (const auto& v : scratch) e += std::norm(v);
    return e;
  };

  const std::size_t n_users = s.users.size();
  out.user_signal_w.assign(n_users, 0.0);
  out.user_interference_w.assign(n_users, 0.0);
  out.user_noise_w.assign(n_users, 0.0);
  out.user_sinr.assign(n_users, 0.0);
  for (std::size_t u = 0; u < n_users; ++u) {
    const BeamField* f = prep.serving[u];
    const int t = user_target(u);
    const std::size_t slot = static_cast<std::size_t>(r) * n_targets_ + t;
    const std::size_t p = s.poa_index(s.beam_owner(f->beam_id));
    double e = 0.0;
    for (std::size_t j = 0; j < nc; ++j) e += std::norm(f->taps[slot * nc + j]);
    const double signal = prep.power_mw[p] * e;
    const double interference = combined(t, prep.group_members[poa_group_[p]], p);
    const double noise = noise_power_w(s.poas[p].bandwidth_hz);
    out.user_signal_w[u] = signal;
    out.user_interference_w[u] = interference;
    out.user_noise_w[u] = noise;
    out.user_sinr[u] = sinr(signal, noise, interference);
  }

  out.human_received_power_w.assign(s.humans.size(), {});
  for (std::size_t h = 0; h < s.humans.size(); ++h) {
    for (std::size_t g = 0; g < group_frequency_.size(); ++g) {
      out.human_received_power_w[h][group_frequency_[g]] =
          combined(human_target_[h], prep.group_members[g], n_poas);
    }
  }
}

RealizationDetail Evaluator::realization_detail(const SolutionState& solution,
                                                const FieldTable& table, int realization) const {
  const auto prep = prepare(solution, table);
  RealizationDetail d;
  realization_pass(prep, realization, d);
  return d;
}

MetricsBundle Evaluator::metrics(const SolutionState& solution, const FieldTable& table) const {
  const auto& s = *scenario_;
  const auto prep = prepare(solution, table);
  const int n_real = config_.n_realizations;
  std::vector<RealizationDetail> details(n_real);
  parallel_for(static_cast<std::size_t>(n_real), config_.workers,
               [&](std::size_t r) { realization_pass(prep, static_cast<int>(r), details[r]); });

  MetricsBundle m;
  const std::size_t n_users = s.users.size();
  m.user_rate_bps.assign(n_users, 0.0);
  m.user_sinr.assign(n_users, 0.0);
  m.user_interference_w.assign(n_users, 0.0);
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::size_t p = s.poa_index(s.beam_owner(prep.serving[u]->beam_id));
    for (const auto& d : details) {
      m.user_rate_bps[u] += shannon_rate(s.poas[p].bandwidth_hz, d.user_sinr[u]);
      m.user_sinr[u] += d.user_sinr[u];
      m.user_interference_w[u] += d.user_interference_w[u];
    }
    m.user_rate_bps[u] /= n_real;
    m.user_sinr[u] /= n_real;
    m.user_interference_w[u] /= n_real;
    m.user_ids.push_back(s.users[u].id);
    m.user_serving_poa.push_back(s.poas[p].id);
  }

  m.human_power_density.resize(s.humans.size());
  m.human_sar_wkg.assign(s.humans.size(), 0.0);
  for (std::size_t h = 0; h < s.humans.size(); ++h) {
    std::vector<IncidentField> fields;
    for (double f : group_frequency_) {
      double prx = 0.0;
      for (const auto& d : details) prx += d.human_received_power_w[h].at(f);
      const double sd = power_density(f, prx / n_real);
      m.human_power_density[h][f] = sd;
      fields.push_back({f, incident_field(sd)});
    }
    m.human_sar_wkg[h] = sar_wb(fields, s.phantom(s.humans[h].phantom), s.frequency_map);
    m.human_ids.push_back(s.humans[h].id);
  }

  m.total_power_w = 0.0;
  for (const auto& p : s.poas) {
    const double dbm = effective_power_dbm(solution, p.id);
    m.poa_power_dbm[p.id] = dbm;
    m.total_power_w += dbm_to_watts(dbm);
  }

  for (std::size_t u = 0; u < n_users; ++u) {
    if (!(m.user_rate_bps[u] >= s.users[u].required_rate_bps)) {
      m.violated.push_back("rate:user:" + std::to_string(s.users[u].id));
    }
  }
  for (std::size_t h = 0; h < s.humans.size(); ++h) {
    if (!(m.human_sar_wkg[h] <= s.sar_limit_wkg)) {
      m.violated.push_back("sar:human:" + std::to_string(s.humans[h].id));
    }
  }
  m.feasible = m.violated.empty();
  return m;
}

MetricsBundle evaluate(const SolutionState& solution, const Scenario& scenario,
                       std::uint64_t seed, int n_realizations, unsigned workers) {
  Evaluator ev(scenario, {seed, n_realizations, workers});
  return ev.evaluate(solution);
}

}  // namespace cellless
