#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace klic {

// Counter-based per-trial random stream: every draw depends only on
// (seed, trial), so results do not depend on how trials are scheduled
// across workers.
class TrialRng {
 public:
  TrialRng(uint64_t seed, uint64_t trial)
      : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL * (trial + 1)))) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform over [0, 1).
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased uniform over [0, n).
  int uniform_int(int n) {
    const uint64_t un = uint64_t(n);
    const uint64_t reject_below = (0 - un) % un;  // 2^64 mod n
    uint64_t x = next_u64();
    while (x < reject_below) x = next_u64();
    return int(x % un);
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace klic
