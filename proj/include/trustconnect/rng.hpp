#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace trustconnect {

/// Seeded random stream whose outputs depend only on the seed.
///
/// std::mt19937_64 is bit-specified by the standard, but the standard
/// distributions are not, so the conversions to uniform and normal variates
/// are done here explicitly.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double standard_normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trustconnect
