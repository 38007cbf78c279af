#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rldwa {

/// Seeded random stream. Wraps mt19937_64 with fixed uniform/gaussian
/// recipes instead of the std distributions, whose output sequences differ
/// between standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  void reseed(std::uint64_t seed) {
    gen_.seed(seed);
    have_spare_ = false;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (cached pair).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double gaussian(double mean, double std_dev) { return mean + std_dev * gaussian(); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return gen_() % n; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rldwa
