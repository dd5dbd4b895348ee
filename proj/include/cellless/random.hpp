#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cellless {

/// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds an ordered list of integers into one 64-bit stream key.
inline constexpr std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// A random stream whose whole sequence is a function of its key. Streams
/// for different keys are used for different links, so evaluation order
/// never changes a draw.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : engine_(mix64(key)) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal(double mean = 0.0, double sigma = 1.0) {
    if (sigma == 0.0) {
      // keep the stream position independent of sigma
      (void)std::normal_distribution<double>(0.0, 1.0)(engine_);
      return mean;
    }
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }
  double exponential(double mean) {
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cellless
