#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace edgeelim {

/// SplitMix64. Fully specified integer arithmetic, so a given seed produces
/// the same stream on every platform. Doubles are built from the top 53 bits.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    constexpr std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Standard normal via Box-Muller (one value per call).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed for sub-stream `index` of `master`.
/// Point i of an instance uses derive_stream(seed, i); trial t of an
/// experiment uses derive_stream(master, t).
constexpr std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    mix.next();
    return mix.next();
}

}  // namespace edgeelim
