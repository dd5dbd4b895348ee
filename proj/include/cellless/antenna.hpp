#pragma once

#include <complex>

#include "cellless/geometry.hpp"

namespace cellless {

enum class ElementPattern { Isotropic, ThreeGpp8dBi };

/// Uniform rectangular panel of rows x cols elements. Tilt is fixed at 90
/// degrees and slant at 0, so only the mechanical azimuth orients the panel.
struct PanelGeometry {
  int rows = 1;                     // M, vertical
  int cols = 1;                     // N, horizontal
  double v_spacing = 0.5;           // wavelengths
  double h_spacing = 0.5;           // wavelengths
  double mechanical_azimuth = 0.0;  // radians, GCS
  ElementPattern element = ElementPattern::Isotropic;

  bool operator==(const PanelGeometry&) const = default;
};

/// Beam direction in the panel's local coordinate system.
struct SteeringDirection {
  double zenith = kPi / 2;
  double azimuth = 0.0;
};

/// Half-power beamwidth constant of a half-wavelength uniform array
/// (beamwidth ~ kappa / N radians).
inline constexpr double kBeamwidthConstant = 1.782;

/// Element power pattern in dB; angles in LCS radians.
double element_gain_db(ElementPattern pattern, double theta, double phi);

/// sinc(n g) / sinc(g) with sinc(x) = sin(pi x)/(pi x). Removable
/// singularities (g at an integer) are resolved by their limit.
double sinc_ratio(int n, double g);

/// Field radiated by a steered panel toward (theta, phi), both in LCS.
std::complex<double> panel_field(const PanelGeometry& geom, double theta, double phi,
                                 const SteeringDirection& steer);

/// Number of active columns realizing an azimuth beamwidth `width`.
int width_to_panel(double width, const PanelGeometry& geom);

/// Converts a GCS direction into the LCS of a panel with the given
/// mechanical azimuth.
inline SteeringDirection to_local(double zenith, double azimuth, double mechanical_azimuth) {
  return {zenith, wrap_angle(azimuth - mechanical_azimuth)};
}

/// Panel with precomputed steering terms; evaluates F for many directions.
class SteeredPanel {
 public:
  SteeredPanel(const PanelGeometry& geom, const SteeringDirection& steer);

  std::complex<double> field(double theta, double phi) const;

  /// Same as field() when the caller already holds cos(theta),
  /// sin(phi)sin(theta) and the element amplitude 10^(A_dB/20).
  std::complex<double> field(double cos_theta, double sin_phi_sin_theta,
                             double element_amplitude) const;

  bool trivial() const noexcept { return trivial_; }
  const PanelGeometry& geometry() const noexcept { return geom_; }

 private:
  PanelGeometry geom_;
  double steer_cos_theta_;
  double steer_sin_phi_sin_theta_;
  double scale_;
  bool trivial_;
};

}  // namespace cellless
