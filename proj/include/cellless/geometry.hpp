#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace cellless {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Cartesian position in the global coordinate system, meters.
struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Position3D&) const = default;
};

inline double distance_2d(const Position3D& a, const Position3D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_3d(const Position3D& a, const Position3D& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [-pi, pi].
inline double wrap_angle(double a) {
  if (a >= -kPi && a <= kPi) return a;
  double w = std::remainder(a, kTwoPi);
  if (w < -kPi) w += kTwoPi;
  if (w > kPi) w -= kTwoPi;
  return w;
}

/// dBm -> W. -inf dBm maps to exactly 0 W.
inline double dbm_to_watts(double dbm) {
  if (dbm == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watts_to_dbm(double w) {
  if (w <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(w) + 30.0;
}

inline double wavelength(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

}  // namespace cellless
