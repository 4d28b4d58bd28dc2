#pragma once

#include <cstdint>

namespace pwmap {

// splitmix64: the fixed 64-bit generator used everywhere randomness is
// needed (seed points, dither, test generators). Documented in the README;
// any implementation of the same recurrence reproduces every stream.
struct splitmix64 {
    std::uint64_t state;

    explicit splitmix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1): top 53 bits scaled.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (-1, 1).
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    // Uniform in (lo, hi) avoiding the endpoints.
    double uniform_open(double lo, double hi) {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return lo + u * (hi - lo);
    }
};

} // namespace pwmap
