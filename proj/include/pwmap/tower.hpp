#pragma once

#include "pwmap/map.hpp"
#include "pwmap/symbolic.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace pwmap {

// Tracker state after l steps from the base point y:
//   pulled = C_l, the depth-l cylinder around y,
//   image  = D_l, the image of that cylinder under the l-fold map,
// advanced functionally one symbol at a time. cut_flags[i] records whether
// D_{i+1} had to be clipped when advancing from level i+1 to i+2.
template <class R>
struct tower_tracker {
    R base_point{};
    std::vector<R> orbit;   // y, T y, ..., T^l y
    itinerary word;         // l symbols
    open_interval<R> pulled;
    open_interval<R> image;
    branch_direction orientation = branch_direction::increasing;
    std::vector<bool> cut_flags;

    std::size_t level() const { return word.size(); }
    bool dead() const { return pulled.empty() || image.empty(); }
};

template <class R>
tower_tracker<R> init_tracker(const piecewise_monotonic_map<R>& map, R y) {
    tower_tracker<R> s;
    std::size_t b = map.branch_of(y);
    s.base_point = y;
    s.orbit.push_back(y);
    s.orbit.push_back(map.evaluate_on(b, y));
    s.word.push_back(static_cast<int>(b));
    s.pulled = map.branch_domain(b);
    s.image = map.branch_image(b);
    s.orientation = map.branch(b).direction();
    return s;
}

// One step l -> l+1. The image is clipped to the branch domain of T^l y
// (cut flag when the clip is proper); a cut pulls the clipped constraint
// back through the stored word to refine C. Without a cut, C is unchanged
// and D just maps forward.
template <class R>
tower_tracker<R> advance(const piecewise_monotonic_map<R>& map, tower_tracker<R> s) {
    const std::size_t l = s.level();
    const R& t = s.orbit.back();
    std::size_t j;
    try {
        j = map.branch_of(t);
    } catch (const critical_point_error& e) {
        throw critical_point_error(l, e.value);
    }
    open_interval<R> z = map.branch_domain(j);
    const bool cut = !(z.lo <= s.image.lo && s.image.hi <= z.hi);
    open_interval<R> clipped = open_interval<R>::intersect(s.image, z);
    apply_collapse_policy(clipped);

    open_interval<R> new_pulled = s.pulled;
    if (cut && !clipped.empty()) {
        open_interval<R> x = clipped;
        for (std::size_t idx = l; idx-- > 0;) {
            x = map.pull_back(static_cast<std::size_t>(s.word[idx]), x);
            if (apply_collapse_policy(x) || x.empty()) break;
        }
        new_pulled = x;
    }
    open_interval<R> new_image = clipped.empty() ? clipped : map.push_forward(j, clipped);
    apply_collapse_policy(new_image);

    if (map.branch(j).direction() == branch_direction::decreasing)
        s.orientation = s.orientation == branch_direction::increasing
                            ? branch_direction::decreasing
                            : branch_direction::increasing;
    s.pulled = new_pulled;
    s.image = new_image;
    s.orbit.push_back(map.evaluate_on(j, t));
    s.word.push_back(static_cast<int>(j));
    s.cut_flags.push_back(cut);
    return s;
}

template <class R>
struct covering_time {
    std::size_t l;
    itinerary word;          // first l symbols of the base orbit
    open_interval<R> pulled; // C_l
    open_interval<R> image;  // D_l
};

template <class R>
struct covering_scan {
    std::vector<covering_time<R>> times;
    bool truncated = false;      // orbit hit the critical set before l_max
    std::size_t levels_scanned = 0;
};

// Covering predicate of the scan: the closure of C must sit strictly inside
// D, so a shared endpoint never counts as covering even at margin 0.
template <class R>
bool strictly_covers(const open_interval<R>& image, const open_interval<R>& pulled,
                     const R& margin) {
    if (margin > R(0)) return covers_with_margin(image, pulled, margin);
    if (image.empty() || pulled.empty()) return false;
    return image.lo < pulled.lo && pulled.hi < image.hi;
}

// All l <= l_max with closure(C_l) strictly inside D_l with the given margin.
template <class R>
covering_scan<R> covering_times(const piecewise_monotonic_map<R>& map, const R& y,
                                std::size_t l_max, const R& margin) {
    covering_scan<R> out;
    if (l_max == 0) return out;
    tower_tracker<R> s;
    try {
        s = init_tracker(map, y);
    } catch (const critical_point_error&) {
        out.truncated = true;
        return out;
    }
    for (std::size_t l = 1; l <= l_max; ++l) {
        out.levels_scanned = l;
        if (strictly_covers(s.image, s.pulled, margin))
            out.times.push_back(covering_time<R>{l, s.word, s.pulled, s.image});
        if (l == l_max) break;
        try {
            s = advance(map, s);
        } catch (const critical_point_error&) {
            out.truncated = true;
            break;
        }
        if (s.dead()) {
            out.truncated = true;
            break;
        }
    }
    return out;
}

struct cut_scan {
    std::vector<std::size_t> cuts;
    std::vector<std::size_t> boundary_touches; // levels where a D_l endpoint meets C
    bool truncated = false;
};

// Levels l <= l_max whose advance clipped D_l, plus the superset diagnostic
// of levels where an endpoint of D_l lies on the critical set (within the
// boundary tolerance).
template <class R>
cut_scan cut_times(const piecewise_monotonic_map<R>& map, const R& y, std::size_t l_max) {
    cut_scan out;
    if (l_max == 0) return out;
    tower_tracker<R> s;
    try {
        s = init_tracker(map, y);
    } catch (const critical_point_error&) {
        out.truncated = true;
        return out;
    }
    const R eps = scalar_traits<R>::boundary_eps();
    for (std::size_t l = 1; l <= l_max; ++l) {
        if (map.distance_to_critical(s.image.lo) <= eps ||
            map.distance_to_critical(s.image.hi) <= eps)
            out.boundary_touches.push_back(l);
        try {
            s = advance(map, s);
        } catch (const critical_point_error&) {
            out.truncated = true;
            break;
        }
        if (s.cut_flags.back()) out.cuts.push_back(l);
        if (s.dead() && l < l_max) {
            out.truncated = true;
            break;
        }
    }
    return out;
}

} // namespace pwmap
