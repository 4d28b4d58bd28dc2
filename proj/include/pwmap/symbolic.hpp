#pragma once

#include "pwmap/map.hpp"
#include "pwmap/orbit.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace pwmap {

using itinerary = std::vector<int>;

constexpr std::size_t default_depth_cap = 20;

// Cylinder of a word: the open set of points sharing that itinerary prefix.
// For piecewise monotone maps this is an open interval, possibly empty.
// collapsed marks float pullbacks that shrank below the width tolerance.
template <class R>
struct cylinder {
    itinerary word;
    open_interval<R> interval;
    bool collapsed = false;
};

// Backward pullback: J_{k-1} = Z_{w_{k-1}}, then J_t = Z_{w_t} intersect
// T_{w_t}^{-1}(J_{t+1}). Exact under the rational backend on affine maps.
template <class R>
cylinder<R> cylinder_of_word(const piecewise_monotonic_map<R>& map, itinerary word) {
    cylinder<R> c;
    if (word.empty()) {
        c.interval = open_interval<R>{R(0), R(1)};
        c.word = std::move(word);
        return c;
    }
    for (int s : word)
        if (s < 0 || static_cast<std::size_t>(s) >= map.branch_count())
            throw validation_error("word symbol out of range");
    open_interval<R> j = map.branch_domain(static_cast<std::size_t>(word.back()));
    for (std::size_t t = word.size() - 1; t-- > 0;) {
        j = map.pull_back(static_cast<std::size_t>(word[t]), j);
        if (apply_collapse_policy(j)) c.collapsed = true;
        if (j.empty()) break;
    }
    c.word = std::move(word);
    c.interval = j;
    return c;
}

// Cylinder containing x at depth k (k = 0 gives the empty word on (0,1)).
template <class R>
cylinder<R> cylinder_of_point(const piecewise_monotonic_map<R>& map, const R& x, std::size_t k) {
    if (k == 0) return cylinder<R>{itinerary{}, open_interval<R>{R(0), R(1)}, false};
    orbit_trace<R> t = iterate(map, x, k - 1);
    itinerary w = t.word;
    w.push_back(static_cast<int>(map.branch_of(t.points.back())));
    return cylinder_of_word(map, std::move(w));
}

// All nonempty cylinders of depth k in lexicographic word order. Built level
// by level: cyl(s w) = Z_s intersect T_s^{-1}(cyl(w)), one pullback step per
// candidate word.
template <class R>
std::vector<cylinder<R>> enumerate_cylinders(const piecewise_monotonic_map<R>& map,
                                             std::size_t k,
                                             std::size_t depth_cap = default_depth_cap) {
    if (k > depth_cap)
        throw depth_cap_error("cylinder depth " + std::to_string(k) + " exceeds cap " +
                              std::to_string(depth_cap));
    std::vector<cylinder<R>> level;
    level.push_back(cylinder<R>{itinerary{}, open_interval<R>{R(0), R(1)}, false});
    for (std::size_t depth = 1; depth <= k; ++depth) {
        std::vector<cylinder<R>> next;
        next.reserve(level.size() * map.branch_count());
        for (std::size_t s = 0; s < map.branch_count(); ++s) {
            for (const cylinder<R>& c : level) {
                open_interval<R> iv = depth == 1 ? map.branch_domain(s)
                                                 : map.pull_back(s, c.interval);
                bool collapsed = apply_collapse_policy(iv) || c.collapsed;
                if (iv.empty()) continue; // includes collapsed slivers
                itinerary w;
                w.reserve(c.word.size() + 1);
                w.push_back(static_cast<int>(s));
                w.insert(w.end(), c.word.begin(), c.word.end());
                next.push_back(cylinder<R>{std::move(w), iv, collapsed});
            }
        }
        level = std::move(next);
    }
    return level;
}

// Diameters of the cylinders around x for depths 0..k_max; nonincreasing.
template <class R>
std::vector<std::pair<std::size_t, R>> shrinking_report(const piecewise_monotonic_map<R>& map,
                                                        const R& x, std::size_t k_max) {
    std::vector<std::pair<std::size_t, R>> rows;
    rows.reserve(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k)
        rows.emplace_back(k, cylinder_of_point(map, x, k).interval.length());
    return rows;
}

} // namespace pwmap
