#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace samdisc {

// Deterministic random source. std::mt19937_64 supplies the bits, but the
// mappings to doubles are spelled out here because the standard distributions
// are implementation-defined and reports must be bit-reproducible for a given
// seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // splitmix64 finalizer; used to derive independent stream seeds.
    static constexpr std::uint64_t hash(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    static constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        return hash(seed ^ hash(stream + 0x9E3779B97F4A7C15ull));
    }

    std::uint64_t bits() { return eng_(); }

    // Uniform in [0, 1), 53 usable bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; one spare value cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> cgaussian() {
        double re = gaussian();
        double im = gaussian();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace samdisc
