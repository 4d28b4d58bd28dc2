#pragma once

#include "pwmap/map.hpp"

#include <cstddef>
#include <vector>

namespace pwmap {

// Forward orbit segment with its itinerary. points has n+1 entries,
// word has n (word[s] = branch containing points[s]).
template <class R>
struct orbit_trace {
    std::vector<R> points;
    std::vector<int> word;
    R min_critical_distance{};
};

// Pure n-fold iteration. Throws critical_point_error with the step at which
// the orbit hit the critical set (callers may reseed).
template <class R>
orbit_trace<R> iterate(const piecewise_monotonic_map<R>& map, R x, std::size_t n) {
    orbit_trace<R> t;
    t.points.reserve(n + 1);
    t.word.reserve(n);
    t.points.push_back(std::move(x));
    t.min_critical_distance = map.distance_to_critical(t.points.front());
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t b;
        try {
            b = map.branch_of(t.points.back());
        } catch (const critical_point_error& e) {
            throw critical_point_error(s, e.value);
        }
        t.word.push_back(static_cast<int>(b));
        t.points.push_back(map.evaluate_on(b, t.points.back()));
        R d = map.distance_to_critical(t.points.back());
        if (d < t.min_critical_distance) t.min_critical_distance = d;
    }
    return t;
}

} // namespace pwmap
