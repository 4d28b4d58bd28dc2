#pragma once

#include "pwmap/map.hpp"
#include "pwmap/orbit.hpp"
#include "pwmap/rng.hpp"

#include <cstddef>

namespace pwmap {

// A long pseudo-orbit for use as an empirical target. Float orbits of maps
// with dyadic-exact branches (tent at slope 2, doubling) collapse onto short
// cycles within ~55 steps because every arithmetic step is exact in binary;
// a tiny seeded dither (default 1e-13, far below any tolerance in play but
// far above the ~1e-16 rounding scale) keeps the sampled orbit spread out
// while leaving its statistics unchanged at the resolutions we measure.
// The pure dynamics in iterate() is untouched; dither lives only here.
struct sampled_orbit {
    double seed_point = 0;
    orbit_trace<double> trace;
    std::size_t reseeds = 0; // fresh starting points consumed beyond the first
};

inline sampled_orbit sample_orbit(const piecewise_monotonic_map<double>& map, splitmix64& rng,
                                  std::size_t length, double dither = 1e-13) {
    constexpr std::size_t max_attempts = 10;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        const double x0 = rng.uniform_open(0.0, 1.0);
        orbit_trace<double> tr;
        tr.points.reserve(length + 1);
        tr.word.reserve(length);
        tr.min_critical_distance = 1.0;
        double x = x0;
        bool ok = true;
        for (std::size_t step = 0; step < length && ok; ++step) {
            std::size_t b = 0;
            int nudges = 0;
            for (;;) {
                try {
                    b = map.branch_of(x);
                    break;
                } catch (const critical_point_error&) {
                    if (dither <= 0 || ++nudges > 100) { ok = false; break; }
                    x += dither * rng.uniform_sym();
                    detail::clamp_unit(x);
                }
            }
            if (!ok) break;
            const double d = map.distance_to_critical(x);
            if (d < tr.min_critical_distance) tr.min_critical_distance = d;
            tr.points.push_back(x);
            tr.word.push_back(static_cast<int>(b));
            double y = map.evaluate_on(b, x);
            if (dither > 0) {
                y += dither * rng.uniform_sym();
                detail::clamp_unit(y);
            }
            x = y;
        }
        if (!ok) continue;
        const double d = map.distance_to_critical(x);
        if (d < tr.min_critical_distance) tr.min_critical_distance = d;
        tr.points.push_back(x);
        sampled_orbit out;
        out.seed_point = x0;
        out.trace = std::move(tr);
        out.reseeds = attempt;
        return out;
    }
    throw map_error("orbit sampling failed after 10 reseeds");
}

} // namespace pwmap
