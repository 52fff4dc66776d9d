#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vigil {

// Seeded random source with hand-rolled output transforms.
//
// The mt19937_64 engine itself is pinned by the C++ standard, but
// std::uniform_real_distribution / std::normal_distribution are
// implementation-defined, which would break byte-identical trace
// reproduction across toolchains. So the transforms live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be >= 1.
  int uniform_int(int n) {
    int i = static_cast<int>(uniform01() * static_cast<double>(n));
    return i >= n ? n - 1 : i;
  }

  // Standard normal via Box-Muller, pair cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vigil
