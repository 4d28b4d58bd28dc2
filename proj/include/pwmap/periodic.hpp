#pragma once

#include "pwmap/map.hpp"
#include "pwmap/measure.hpp"
#include "pwmap/orbit.hpp"
#include "pwmap/symbolic.hpp"
#include "pwmap/tower.hpp"

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace pwmap {

template <class R>
struct periodic_orbit {
    R point{};                     // fixed point of the word-composed branch
    std::size_t period = 0;        // construction period (word length)
    std::size_t minimal_period = 0;
    std::vector<R> orbit;          // p, Tp, ..., T^{l-1}p
    R residual{};                  // |T^l p - p|
    itinerary word;
};

namespace detail {

// Forward images I, T_{w_0} I, ..., of the cylinder along its own word.
// The last entry is the full image T^l(cyl).
template <class R>
std::vector<open_interval<R>> forward_images(const piecewise_monotonic_map<R>& map,
                                             const cylinder<R>& cyl) {
    std::vector<open_interval<R>> images;
    images.reserve(cyl.word.size() + 1);
    images.push_back(cyl.interval);
    for (int s : cyl.word)
        images.push_back(map.push_forward(static_cast<std::size_t>(s), images.back()));
    return images;
}

// T^l along a fixed word, in extended precision; branch selection is forced
// by the word, so points near branch boundaries do not derail the chain.
template <class R>
long double compose_word(const piecewise_monotonic_map<R>& map, const itinerary& word,
                         long double x) {
    long double v = x;
    for (int s : word) {
        const auto& br = map.branch(static_cast<std::size_t>(s));
        if (br.is_affine()) {
            v = static_cast<long double>(to_double(br.slope())) * v +
                static_cast<long double>(to_double(br.intercept()));
        } else {
            v = static_cast<long double>(to_double(br.forward(from_double_as<R>(
                static_cast<double>(v)))));
        }
        if (v < 0.0L) v = 0.0L;
        if (v > 1.0L) v = 1.0L;
    }
    return v;
}

template <class R>
periodic_orbit<R> finish_orbit(const piecewise_monotonic_map<R>& map, const cylinder<R>& cyl,
                               const R& p, double tol) {
    const std::size_t l = cyl.word.size();
    periodic_orbit<R> out;
    out.point = p;
    out.period = l;
    out.word = cyl.word;
    out.orbit.reserve(l);
    R v = p;
    for (std::size_t s = 0; s < l; ++s) {
        out.orbit.push_back(v);
        v = map.evaluate_on(static_cast<std::size_t>(cyl.word[s]), v);
    }
    out.residual = abs_of<R>(v - p);

    // itinerary sanity: the point's free itinerary must reproduce the word
    for (std::size_t s = 0; s < l; ++s) {
        std::size_t b;
        try {
            b = map.branch_of(out.orbit[s]);
        } catch (const critical_point_error&) {
            throw tolerance_error("periodic point landed on a critical point at step " +
                                  std::to_string(s));
        }
        if (b != static_cast<std::size_t>(cyl.word[s]))
            throw tolerance_error("extracted orbit leaves its cylinder at step " +
                                  std::to_string(s));
    }

    // minimal period among divisors of l (exact comparison in rational mode)
    out.minimal_period = l;
    for (std::size_t d = 1; d < l; ++d) {
        if (l % d != 0) continue;
        if constexpr (scalar_traits<R>::exact) {
            if (out.orbit[d] == p) { out.minimal_period = d; break; }
        } else {
            if (abs_of<R>(out.orbit[d] - p) <= R(tol)) { out.minimal_period = d; break; }
        }
    }
    return out;
}

} // namespace detail

// Extract a period-l point from a covering cylinder: the word-composed branch
// maps cl(interval) onto a superset of itself, so it has a fixed point there.
// margin tightens the covering check (both image overhangs must be >= margin).
// Rational affine maps are solved exactly; float maps by bisection on
// g(x) = T^l x - x evaluated in long double along the word.
template <class R>
periodic_orbit<R> find_periodic_point(const piecewise_monotonic_map<R>& map,
                                      const cylinder<R>& cyl, double tol = 1e-9,
                                      double margin = 0) {
    if (cyl.word.empty()) throw validation_error("empty word has no return branch");
    if (cyl.interval.empty()) throw no_covering_error("cylinder interval is empty");
    const auto images = detail::forward_images(map, cyl);
    const open_interval<R>& target = cyl.interval;
    const open_interval<R>& image = images.back();
    if (image.empty() || !covers_with_margin(image, target, R(margin)))
        throw no_covering_error("cylinder image does not cover the cylinder");

    if constexpr (scalar_traits<R>::exact) {
        if (!map.all_affine())
            throw non_affine_error("exact extraction needs an affine map");
        // compose x -> A x + C along the word
        R A(1), C(0);
        for (int s : cyl.word) {
            const auto& br = map.branch(static_cast<std::size_t>(s));
            A = R(br.slope() * A);
            C = R(br.slope() * C + br.intercept());
        }
        if (A == R(1))
            throw no_sign_change_error("composed branch is a unit-slope translation");
        R p = R(C / (R(1) - A));
        if (p < target.lo || p > target.hi)
            throw no_sign_change_error("exact fixed point escaped the cylinder");
        return detail::finish_orbit(map, cyl, p, tol);
    } else {
        const double lo = to_double(target.lo);
        const double hi = to_double(target.hi);
        const double width = hi - lo;
        double off = width * 0x1p-20;
        if (margin > 0) off = std::min(margin / 2, width / 4);
        double a = lo + off;
        double b = hi - off;
        if (!(a < b)) { a = lo + width / 4; b = hi - width / 4; }
        auto g = [&](double x) {
            return detail::compose_word(map, cyl.word, static_cast<long double>(x)) -
                   static_cast<long double>(x);
        };
        long double ga = g(a), gb = g(b);
        if (ga == 0.0L) return detail::finish_orbit(map, cyl, R(a), tol);
        if (gb == 0.0L) return detail::finish_orbit(map, cyl, R(b), tol);
        if ((ga > 0.0L) == (gb > 0.0L))
            throw no_sign_change_error("no sign change across the covering cylinder");
        double best = a;
        long double best_res = ga < 0.0L ? -ga : ga;
        auto consider = [&](double x, long double gx) {
            long double r = gx < 0.0L ? -gx : gx;
            if (r < best_res) { best_res = r; best = x; }
        };
        consider(b, gb);
        for (int it = 0; it < 200; ++it) {
            const double mid = a + (b - a) / 2;
            if (mid <= a || mid >= b) break;
            const long double gm = g(mid);
            consider(mid, gm);
            if (gm == 0.0L) break;
            if ((gm > 0.0L) == (ga > 0.0L)) { a = mid; ga = gm; }
            else { b = mid; gb = gm; }
        }
        if (static_cast<double>(best_res) > tol)
            throw tolerance_error("bisection residual " + std::to_string(static_cast<double>(best_res)) +
                                  " exceeds tolerance");
        return detail::finish_orbit(map, cyl, R(best), tol);
    }
}

// Smallest divisor d of l with T^d p back at p (within tol in float mode,
// exactly in rational mode). Returns l if the orbit hits a critical point.
template <class R>
std::size_t minimal_period(const piecewise_monotonic_map<R>& map, const R& p, std::size_t l,
                           double tol = 1e-9) {
    if (l == 0) throw validation_error("period must be positive");
    std::vector<R> pts;
    try {
        pts = iterate(map, p, l).points;
    } catch (const critical_point_error&) {
        return l;
    }
    for (std::size_t d = 1; d < l; ++d) {
        if (l % d != 0) continue;
        if constexpr (scalar_traits<R>::exact) {
            if (pts[d] == p) return d;
        } else {
            if (abs_of<R>(pts[d] - p) <= R(tol)) return d;
        }
    }
    return l;
}

// Uniform measure on the extracted orbit (duplicate atoms merge, so a point
// with minimal period d < l still yields total mass 1 spread over d atoms).
template <class R>
discrete_measure<R> periodic_measure(const periodic_orbit<R>& po) {
    std::vector<std::pair<R, R>> atoms;
    atoms.reserve(po.orbit.size());
    for (const R& x : po.orbit) atoms.emplace_back(x, R(1));
    return discrete_measure<R>::from_atoms(std::move(atoms));
}

} // namespace pwmap
