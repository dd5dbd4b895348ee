#include "cellless/antenna.hpp"

#include <algorithm>
#include <cmath>

namespace cellless {

double element_gain_db(ElementPattern pattern, double theta, double phi) {
  if (pattern == ElementPattern::Isotropic) return 0.0;
  const double theta_deg = rad_to_deg(theta);
  const double phi_deg = rad_to_deg(wrap_angle(phi));
  const double a1 = std::min(12.0 * std::pow((theta_deg - 90.0) / 65.0, 2), 30.0);
  const double a2 = std::min(12.0 * std::pow(phi_deg / 65.0, 2), 30.0);
  return 8.0 - std::min(a1 + a2, 30.0);
}

double sinc_ratio(int n, double g) {
  if (n == 1) return 1.0;
  const double den = std::sin(kPi * g);
  if (std::abs(den) < 1e-12) {
    // g -> k: sin(pi n g) / (n sin(pi g)) -> (-1)^{(n-1)k}
    const long long k = std::llround(g);
    return ((static_cast<long long>(n - 1) * k) % 2 == 0) ? 1.0 : -1.0;
  }
  return std::sin(kPi * n * g) / (n * den);
}

SteeredPanel::SteeredPanel(const PanelGeometry& geom, const SteeringDirection& steer)
    : geom_(geom),
      steer_cos_theta_(std::cos(steer.zenith)),
      steer_sin_phi_sin_theta_(std::sin(steer.azimuth) * std::sin(steer.zenith)),
      scale_(std::sqrt(static_cast<double>(geom.rows) * geom.cols)),
      trivial_(geom.rows == 1 && geom.cols == 1 && geom.element == ElementPattern::Isotropic) {}

std::complex<double> SteeredPanel::field(double cos_theta, double sin_phi_sin_theta,
                                         double element_amplitude) const {
  if (trivial_) return {1.0, 0.0};
  const int m = geom_.rows;
  const int n = geom_.cols;
  const double g1 = geom_.v_spacing * (cos_theta - steer_cos_theta_);
  const double g2 = geom_.h_spacing * (sin_phi_sin_theta - steer_sin_phi_sin_theta_);
  const double magnitude = element_amplitude * sinc_ratio(m, g1) * sinc_ratio(n, g2) * scale_;
  const double phase = kPi * ((m - 1) * g1 + (n - 1) * g2);
  return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

std::complex<double> SteeredPanel::field(double theta, double phi) const {
  if (trivial_) return {1.0, 0.0};
  const double amp = geom_.element == ElementPattern::Isotropic
                         ? 1.0
                         : std::pow(10.0, element_gain_db(geom_.element, theta, phi) / 20.0);
  return field(std::cos(theta), std::sin(phi) * std::sin(theta), amp);
}

std::complex<double> panel_field(const PanelGeometry& geom, double theta, double phi,
                                 const SteeringDirection& steer) {
  return SteeredPanel(geom, steer).field(theta, phi);
}

int width_to_panel(double width, const PanelGeometry& geom) {
  const double ideal = kBeamwidthConstant / width;
  const long long cols = std::llround(ideal);
  return static_cast<int>(std::clamp<long long>(cols, 1, geom.cols));
}

}  // namespace cellless
