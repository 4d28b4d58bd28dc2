#pragma once

#include "pwmap/scalar.hpp"

#include <algorithm>

namespace pwmap {

// Open interval (lo, hi); empty iff lo >= hi.
template <class R>
struct open_interval {
    R lo{};
    R hi{};

    bool empty() const { return !(lo < hi); }
    R length() const { return empty() ? R(0) : R(hi - lo); }
    bool contains(const R& x) const { return lo < x && x < hi; }
    bool contains_closure_of(const open_interval& inner) const {
        return !inner.empty() && lo < inner.lo && inner.hi < hi;
    }

    static open_interval intersect(const open_interval& a, const open_interval& b) {
        open_interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
        if (r.empty()) return open_interval{R(0), R(0)};
        return r;
    }
};

// closure(inner) sits inside outer with at least `margin` clearance on both sides.
template <class R>
bool covers_with_margin(const open_interval<R>& outer, const open_interval<R>& inner,
                        const R& margin) {
    if (inner.empty() || outer.empty()) return false;
    return outer.lo + margin <= inner.lo && inner.hi <= outer.hi - margin;
}

} // namespace pwmap
