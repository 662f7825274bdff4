#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bhacs {

// Seeded RNG wrapper. Draws are produced by hand from raw mt19937_64 output so
// that streams are reproducible across standard library implementations
// (std::uniform_real_distribution et al. are not pinned by the standard).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; second value cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, bound) by rejection, bound >= 1.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = eng_();
        while (x >= limit) x = eng_();
        return x % bound;
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bhacs
