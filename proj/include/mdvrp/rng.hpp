// Seeded randomness used by every randomized component.  The generator is
// mt19937_64; uniform and normal variates are derived with explicit
// arithmetic so that outputs are identical across platforms and standard
// library implementations.
#ifndef MDVRP_RNG_HPP
#define MDVRP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mdvrp {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; two variates per trig pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mdvrp

#endif
