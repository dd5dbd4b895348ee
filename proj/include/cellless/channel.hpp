#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cellless/antenna.hpp"
#include "cellless/geometry.hpp"
#include "cellless/random.hpp"

namespace cellless {

enum class ScenarioKind { InfDh, UmiSc };

/// Pathloss PL = a + b log10(d_3D / 1 m) + c log10(f / 1 GHz), in dB.
struct PathlossCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  bool operator==(const PathlossCoeffs&) const = default;
};

/// LoS-probability parameters. InF uses the clutter size together with the
/// scenario clutter density and height; UMi uses the two distance scales.
struct LosModel {
  double clutter_size_m = 2.0;
  double umi_d1_m = 18.0;
  double umi_d2_m = 36.0;

  bool operator==(const LosModel&) const = default;
};

/// Statistics of the cluster-ray generator. Angles in radians.
struct ChannelParams {
  int n_clusters = 1;
  int n_rays = 20;
  double delay_spread_s = 50e-9;
  double azimuth_spread_dep = 0.0;
  double azimuth_spread_arr = 0.0;
  double zenith_spread_dep = 0.0;
  double zenith_spread_arr = 0.0;
  // Full width of the equal-spaced ray offsets around each cluster mean.
  double ray_spread_azimuth = 0.0;
  double ray_spread_zenith = 0.0;
  double shadow_sigma_los_db = 0.0;
  double shadow_sigma_nlos_db = 0.0;
  double rician_k_mean_db = 9.0;
  double rician_k_sigma_db = 0.0;
  PathlossCoeffs pathloss_los;
  PathlossCoeffs pathloss_nlos;
  LosModel los_model;

  bool operator==(const ChannelParams&) const = default;

  static ChannelParams defaults(ScenarioKind kind);
};

/// Environment inputs to the LoS model.
struct PropagationSite {
  ScenarioKind kind = ScenarioKind::InfDh;
  double clutter_density = 0.0;
  double clutter_height_m = 0.0;
};

/// GCS direction, radians.
struct Direction {
  double zenith = kPi / 2;
  double azimuth = 0.0;
};

struct Ray {
  Direction departure;
  Direction arrival;
  double phase = 0.0;  // [0, 2 pi)
};

struct Cluster {
  double delay_s = 0.0;
  double power = 0.0;
  std::vector<Ray> rays;
};

struct LinkGeometry {
  Position3D tx;
  Position3D rx;
  double frequency_hz = 0.0;
};

/// One seeded draw of a PoA -> target link. Cluster delays are excess
/// delays: sorted, with the first cluster at 0 s.
struct LinkRealization {
  bool los = false;
  double pathloss_db = 0.0;
  double shadow_db = 0.0;
  double rician_k = 0.0;  // linear; 0 when nLoS
  std::vector<Cluster> clusters;
  Direction los_departure;
  Direction los_arrival;
  double distance_3d = 0.0;
  double distance_2d = 0.0;
  double wavelength_m = 0.0;
};

/// A panel together with its beam direction (LCS).
struct PanelState {
  PanelGeometry geometry;
  SteeringDirection steer;
};

/// Delay-domain taps of one or more links, already power-scaled (sqrt(W)).
struct TapSet {
  std::vector<double> delays;
  std::vector<std::complex<double>> taps;
};

double los_probability(const PropagationSite& site, double d_2d, double tx_height,
                       double rx_height, const ChannelParams& params);

/// Positive loss in dB; strictly increasing in d_3d. nLoS is floored by the
/// LoS value as in the standard's InF/UMi tables.
double pathloss_db(bool los, double d_3d, double frequency_hz, const ChannelParams& params);

LinkRealization sample_link(const LinkGeometry& geometry, const PropagationSite& site,
                            const ChannelParams& params, RandomStream& stream);

/// Per-cluster complex amplitudes of the link at 0 dBm transmit power, so
/// that |tap|^2 is in watts. The LoS component joins the first cluster.
std::vector<std::complex<double>> link_taps(const LinkRealization& link, const PanelState& tx,
                                            const PanelState& rx);

/// Same as link_taps for several transmit beams of one panel at once.
/// out[b * n_clusters + j] receives tap j of beam b.
void link_taps(const LinkRealization& link, std::span<const SteeredPanel> tx_beams,
               const SteeredPanel& rx, std::span<std::complex<double>> out);

/// Beam-independent terms of a link for one transmit panel geometry and a
/// fixed receive panel: ray rotations, element amplitudes and direction
/// cosines. Sweeping many beams over it avoids recomputing them.
struct LinkSweep {
  struct RayTerm {
    std::complex<double> base;  // receive field times ray phase rotation
    double cos_theta = 0.0;
    double sin_phi_sin_theta = 0.0;
    double element_amplitude = 1.0;
  };
  std::vector<RayTerm> rays;             // grouped by cluster
  std::vector<std::uint32_t> ray_end;    // one past the last ray of cluster j
  std::vector<double> cluster_weight;
  bool los = false;
  std::complex<double> los_base;         // weight included
  RayTerm los_departure;
};

LinkSweep prepare_sweep(const LinkRealization& link, const PanelGeometry& tx,
                        const SteeredPanel& rx);

/// link_taps over a prepared sweep; all beams must share its panel geometry.
void link_taps(const LinkSweep& sweep, std::span<const SteeredPanel> tx_beams,
               std::span<std::complex<double>> out);

/// Integral of |h(tau)|^2 for the link at tx_power_dbm.
double link_energy(const LinkRealization& link, double tx_power_dbm, const PanelState& tx,
                   const PanelState& rx);

TapSet link_tap_set(const LinkRealization& link, double tx_power_dbm, const PanelState& tx,
                    const PanelState& rx);

/// Integral of |sum_i h_i(tau)|^2: taps at identical delays add coherently,
/// taps at distinct delays add in power.
double coherent_energy(std::span<const TapSet> sets);

/// Energy of the superposed interferer responses at the victim.
double interference_energy(std::span<const LinkRealization> links,
                           std::span<const PanelState> tx_panels,
                           std::span<const double> tx_powers_dbm, const PanelState& rx);

/// 10^(dBm/10), i.e. the transmit power in mW; 0 for -inf.
inline double milliwatts(double dbm) { return dbm_to_watts(dbm) * 1e3; }

}  // namespace cellless
