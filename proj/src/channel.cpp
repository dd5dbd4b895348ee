#include "cellless/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cellless {

ChannelParams ChannelParams::defaults(ScenarioKind kind) {
  ChannelParams p;
  if (kind == ScenarioKind::InfDh) {
    p.n_clusters = 25;
    p.n_rays = 20;
    p.delay_spread_s = 40e-9;
    p.azimuth_spread_dep = deg_to_rad(36.0);
    p.azimuth_spread_arr = deg_to_rad(45.0);
    p.zenith_spread_dep = deg_to_rad(16.0);
    p.zenith_spread_arr = deg_to_rad(20.0);
    p.ray_spread_azimuth = deg_to_rad(5.0);
    p.ray_spread_zenith = deg_to_rad(3.0);
    p.shadow_sigma_los_db = 4.3;
    p.shadow_sigma_nlos_db = 4.0;
    p.rician_k_mean_db = 7.0;
    p.rician_k_sigma_db = 8.0;
    p.pathloss_los = {31.84, 21.5, 19.0};
    p.pathloss_nlos = {33.63, 21.9, 20.0};
  } else {
    p.n_clusters = 12;
    p.n_rays = 20;
    p.delay_spread_s = 65e-9;
    p.azimuth_spread_dep = deg_to_rad(20.0);
    p.azimuth_spread_arr = deg_to_rad(50.0);
    p.zenith_spread_dep = deg_to_rad(5.0);
    p.zenith_spread_arr = deg_to_rad(15.0);
    p.ray_spread_azimuth = deg_to_rad(3.0);
    p.ray_spread_zenith = deg_to_rad(3.0);
    p.shadow_sigma_los_db = 4.0;
    p.shadow_sigma_nlos_db = 7.82;
    p.rician_k_mean_db = 9.0;
    p.rician_k_sigma_db = 5.0;
    p.pathloss_los = {32.4, 21.0, 20.0};
    p.pathloss_nlos = {22.4, 35.3, 21.3};
  }
  return p;
}

double los_probability(const PropagationSite& site, double d_2d, double tx_height,
                       double rx_height, const ChannelParams& params) {
  if (d_2d <= 0.0) return 1.0;
  if (site.kind == ScenarioKind::UmiSc) {
    const double d1 = params.los_model.umi_d1_m;
    const double d2 = params.los_model.umi_d2_m;
    if (d_2d <= d1) return 1.0;
    return d1 / d_2d + std::exp(-d_2d / d2) * (1.0 - d1 / d_2d);
  }
  // InF: exp(-d_2D / k_subsce)
  const double density = site.clutter_density;
  const double hc = site.clutter_height_m;
  if (density <= 0.0 || rx_height >= hc) return 1.0;
  double k = -params.los_model.clutter_size_m / std::log(1.0 - density);
  if (tx_height > hc) k *= (tx_height - rx_height) / (hc - rx_height);
  return std::exp(-d_2d / k);
}

namespace {

double pathloss_formula(const PathlossCoeffs& c, double d_3d, double frequency_hz) {
  const double d = std::max(d_3d, 1e-3);
  return c.a + c.b * std::log10(d) + c.c * std::log10(frequency_hz / 1e9);
}

// Reflects a zenith angle back into [0, pi].
double reflect_zenith(double z) {
  z = std::fmod(z, kTwoPi);
  if (z < 0.0) z += kTwoPi;
  if (z > kPi) z = kTwoPi - z;
  return z;
}

int zenith_stride(int n_rays) {
  for (int s : {7, 11, 13, 3}) {
    if (std::gcd(s, n_rays) == 1) return s;
  }
  return 1;
}

}  // namespace

double pathloss_db(bool los, double d_3d, double frequency_hz, const ChannelParams& params) {
  const double pl_los = pathloss_formula(params.pathloss_los, d_3d, frequency_hz);
  if (los) return pl_los;
  return std::max(pl_los, pathloss_formula(params.pathloss_nlos, d_3d, frequency_hz));
}

LinkRealization sample_link(const LinkGeometry& geometry, const PropagationSite& site,
                            const ChannelParams& params, RandomStream& stream) {
  LinkRealization link;
  const Position3D& tx = geometry.tx;
  const Position3D& rx = geometry.rx;
  link.distance_2d = distance_2d(tx, rx);
  link.distance_3d = distance_3d(tx, rx);
  link.wavelength_m = wavelength(geometry.frequency_hz);

  const double dep_azimuth = link.distance_2d > 0.0 ? std::atan2(rx.y - tx.y, rx.x - tx.x) : 0.0;
  const double dep_zenith =
      link.distance_3d > 0.0 ? std::acos(std::clamp((rx.z - tx.z) / link.distance_3d, -1.0, 1.0))
                             : kPi / 2;
  link.los_departure = {dep_zenith, dep_azimuth};
  link.los_arrival = {kPi - dep_zenith, wrap_angle(dep_azimuth + kPi)};

  const double p_los = los_probability(site, link.distance_2d, tx.z, rx.z, params);
  link.los = stream.uniform() < p_los;
  link.pathloss_db = pathloss_db(link.los, link.distance_3d, geometry.frequency_hz, params);
  link.shadow_db =
      stream.normal(0.0, link.los ? params.shadow_sigma_los_db : params.shadow_sigma_nlos_db);
  const double k_db = stream.normal(params.rician_k_mean_db, params.rician_k_sigma_db);
  link.rician_k = link.los ? std::pow(10.0, k_db / 10.0) : 0.0;

  const int nc = std::max(1, params.n_clusters);
  const int nr = std::max(1, params.n_rays);
  std::vector<double> delays(nc);
  for (auto& d : delays) d = stream.exponential(params.delay_spread_s);
  std::sort(delays.begin(), delays.end());
  const double first = delays.front();
  for (auto& d : delays) d -= first;

  link.clusters.resize(nc);
  double total = 0.0;
  for (int j = 0; j < nc; ++j) {
    link.clusters[j].delay_s = delays[j];
    link.clusters[j].power = std::exp(-delays[j] / params.delay_spread_s);
    total += link.clusters[j].power;
  }
  for (auto& c : link.clusters) c.power /= total;

  const int stride = zenith_stride(nr);
  for (auto& cluster : link.clusters) {
    const double dep_az = link.los_departure.azimuth + stream.normal(0.0, params.azimuth_spread_dep);
    const double dep_zen = link.los_departure.zenith + stream.normal(0.0, params.zenith_spread_dep);
    const double arr_az = link.los_arrival.azimuth + stream.normal(0.0, params.azimuth_spread_arr);
    const double arr_zen = link.los_arrival.zenith + stream.normal(0.0, params.zenith_spread_arr);
    cluster.rays.resize(nr);
    for (int l = 0; l < nr; ++l) {
      const double az_offset = nr > 1 ? (static_cast<double>(l) / (nr - 1) - 0.5) : 0.0;
      const int lz = (l * stride) % nr;
      const double zen_offset = nr > 1 ? (static_cast<double>(lz) / (nr - 1) - 0.5) : 0.0;
      Ray& ray = cluster.rays[l];
      ray.departure = {reflect_zenith(dep_zen + zen_offset * params.ray_spread_zenith),
                       wrap_angle(dep_az + az_offset * params.ray_spread_azimuth)};
      ray.arrival = {reflect_zenith(arr_zen + zen_offset * params.ray_spread_zenith),
                     wrap_angle(arr_az + az_offset * params.ray_spread_azimuth)};
      ray.phase = stream.uniform(0.0, kTwoPi);
    }
  }
  return link;
}

namespace {

struct FieldTerms {
  double cos_theta;
  double sin_phi_sin_theta;
  double element_amplitude;
};

FieldTerms field_terms(const PanelGeometry& geom, const Direction& gcs) {
  const double phi = wrap_angle(gcs.azimuth - geom.mechanical_azimuth);
  const double amp = geom.element == ElementPattern::Isotropic
                         ? 1.0
                         : std::pow(10.0, element_gain_db(geom.element, gcs.zenith, phi) / 20.0);
  return {std::cos(gcs.zenith), std::sin(phi) * std::sin(gcs.zenith), amp};
}

std::complex<double> evaluate(const SteeredPanel& panel, const Direction& gcs) {
  if (panel.trivial()) return {1.0, 0.0};
  const auto t = field_terms(panel.geometry(), gcs);
  return panel.field(t.cos_theta, t.sin_phi_sin_theta, t.element_amplitude);
}

}  // namespace

LinkSweep prepare_sweep(const LinkRealization& link, const PanelGeometry& tx,
                        const SteeredPanel& rx) {
  LinkSweep sweep;
  const double scale = std::pow(10.0, (-30.0 - link.pathloss_db + link.shadow_db) / 20.0);
  const double k = link.rician_k;
  const double nlos_weight = link.los ? std::sqrt(1.0 / (1.0 + k)) : 1.0;
  const bool tx_isotropic_point = tx.rows == 1 && tx.cols == 1 && tx.element == ElementPattern::Isotropic;
  for (const Cluster& cluster : link.clusters) {
    for (const Ray& ray : cluster.rays) {
      const std::complex<double> rot{std::cos(ray.phase), std::sin(ray.phase)};
      LinkSweep::RayTerm term;
      term.base = evaluate(rx, ray.arrival) * rot;
      if (!tx_isotropic_point) {
        const auto t = field_terms(tx, ray.departure);
        term.cos_theta = t.cos_theta;
        term.sin_phi_sin_theta = t.sin_phi_sin_theta;
        term.element_amplitude = t.element_amplitude;
      }
      sweep.rays.push_back(term);
    }
    sweep.ray_end.push_back(static_cast<std::uint32_t>(sweep.rays.size()));
    sweep.cluster_weight.push_back(
        scale * nlos_weight * std::sqrt(cluster.power / static_cast<double>(cluster.rays.size())));
  }
  if (link.los && !link.clusters.empty()) {
    sweep.los = true;
    const double los_weight = scale * std::sqrt(k / (1.0 + k));
    const double phase = -kTwoPi * link.distance_3d / link.wavelength_m;
    const std::complex<double> rot{std::cos(phase), std::sin(phase)};
    sweep.los_base = los_weight * (evaluate(rx, link.los_arrival) * rot);
    if (!tx_isotropic_point) {
      const auto t = field_terms(tx, link.los_departure);
      sweep.los_departure = {{}, t.cos_theta, t.sin_phi_sin_theta, t.element_amplitude};
    }
  }
  return sweep;
}

void link_taps(const LinkSweep& sweep, std::span<const SteeredPanel> tx_beams,
               std::span<std::complex<double>> out) {
  const std::size_t nb = tx_beams.size();
  const std::size_t nc = sweep.ray_end.size();
  std::fill(out.begin(), out.end(), std::complex<double>{});
  if (nb == 0) return;
  const bool tx_trivial = tx_beams.front().trivial();

  std::vector<std::complex<double>> sums(nb);
  std::uint32_t first = 0;
  for (std::size_t j = 0; j < nc; ++j) {
    std::fill(sums.begin(), sums.end(), std::complex<double>{});
    for (std::uint32_t i = first; i < sweep.ray_end[j]; ++i) {
      const auto& ray = sweep.rays[i];
      if (tx_trivial) {
        for (std::size_t b = 0; b < nb; ++b) sums[b] += ray.base;
        continue;
      }
      for (std::size_t b = 0; b < nb; ++b) {
        sums[b] += ray.base * tx_beams[b].field(ray.cos_theta, ray.sin_phi_sin_theta,
                                                ray.element_amplitude);
      }
    }
    first = sweep.ray_end[j];
    for (std::size_t b = 0; b < nb; ++b) out[b * nc + j] = sweep.cluster_weight[j] * sums[b];
  }

  if (sweep.los) {
    const auto& d = sweep.los_departure;
    for (std::size_t b = 0; b < nb; ++b) {
      const std::complex<double> f =
          tx_trivial ? std::complex<double>{1.0, 0.0}
                     : tx_beams[b].field(d.cos_theta, d.sin_phi_sin_theta, d.element_amplitude);
      out[b * nc] += sweep.los_base * f;
    }
  }
}

void link_taps(const LinkRealization& link, std::span<const SteeredPanel> tx_beams,
               const SteeredPanel& rx, std::span<std::complex<double>> out) {
  if (tx_beams.empty()) {
    std::fill(out.begin(), out.end(), std::complex<double>{});
    return;
  }
  link_taps(prepare_sweep(link, tx_beams.front().geometry(), rx), tx_beams, out);
}

std::vector<std::complex<double>> link_taps(const LinkRealization& link, const PanelState& tx,
                                            const PanelState& rx) {
  std::vector<std::complex<double>> out(link.clusters.size());
  const SteeredPanel tx_panel(tx.geometry, tx.steer);
  const SteeredPanel rx_panel(rx.geometry, rx.steer);
  link_taps(link, std::span<const SteeredPanel>(&tx_panel, 1), rx_panel, out);
  return out;
}

double link_energy(const LinkRealization& link, double tx_power_dbm, const PanelState& tx,
                   const PanelState& rx) {
  const double mw = milliwatts(tx_power_dbm);
  if (mw == 0.0) return 0.0;
  double e = 0.0;
  for (const auto& t : link_taps(link, tx, rx)) e += std::norm(t);
  return mw * e;
}

TapSet link_tap_set(const LinkRealization& link, double tx_power_dbm, const PanelState& tx,
                    const PanelState& rx) {
  TapSet set;
  const double amp = std::sqrt(milliwatts(tx_power_dbm));
  set.taps = link_taps(link, tx, rx);
  for (auto& t : set.taps) t *= amp;
  set.delays.reserve(link.clusters.size());
  for (const auto& c : link.clusters) set.delays.push_back(c.delay_s);
  return set;
}

double coherent_energy(std::span<const TapSet> sets) {
  std::vector<std::pair<double, std::complex<double>>> all;
  for (const auto& s : sets) {
    for (std::size_t i = 0; i < s.taps.size(); ++i) all.emplace_back(s.delays[i], s.taps[i]);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double energy = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::complex<double> acc{};
    std::size_t k = i;
    for (; k < all.size() && all[k].first == all[i].first; ++k) acc += all[k].second;
    energy += std::norm(acc);
    i = k;
  }
  return energy;
}

double interference_energy(std::span<const LinkRealization> links,
                           std::span<const PanelState> tx_panels,
                           std::span<const double> tx_powers_dbm, const PanelState& rx) {
  std::vector<TapSet> sets;
  sets.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    sets.push_back(link_tap_set(links[i], tx_powers_dbm[i], tx_panels[i], rx));
  }
  return coherent_energy(sets);
}

}  // namespace cellless
