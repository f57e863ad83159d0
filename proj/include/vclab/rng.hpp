#pragma once

#include <cstdint>
#include <random>

namespace vclab {

// splitmix64 finalizer. Per-trial seeds are derived as mix_seed(base, trial),
// so parallel executors get identical streams no matter how work is chunked.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seeded generator with explicit bit-level conversions. std::mt19937_64 output
// is pinned by the standard; the std distributions are not, so every draw goes
// through these helpers to keep results identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0, 1), 53-bit mantissa
  double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform on [-1, 1)
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

  bool bernoulli(double p) { return next_double() < p; }

  // unbiased uniform integer in [0, n)
  std::uint64_t next_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t u = eng_();
      if (u >= threshold) return u % n;
    }
  }

  // standard normal, Box-Muller
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace vclab
