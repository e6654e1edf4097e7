#pragma once

#include <cmath>
#include <cstdint>

namespace msaccel {

// Seedable 64-bit shift-based generator (SplitMix64). The exact update is
// part of the trace-reproducibility contract, so it is spelled out here
// rather than delegated to std::mt19937:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
//
// Uniform doubles take the top 53 bits: u = (output >> 11) * 2^-53, in [0,1).
// Gaussian variates use Box-Muller on consecutive uniforms (u1, u2):
//   r = sqrt(-2 log(1 - u1)),  theta = 2 pi u2,
//   first variate r cos(theta), second r sin(theta);
// pairs are consumed in order and the second member is cached.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace msaccel
