#pragma once

#include "pwmap/map.hpp"
#include "pwmap/measure.hpp"
#include "pwmap/rng.hpp"
#include "pwmap/symbolic.hpp"

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace testutil {

// Symbol of x by plain interval lookup, no tolerance; -1 on the critical set.
template <class R>
int raw_symbol(const pwmap::piecewise_monotonic_map<R>& map, const R& x) {
    const auto& c = map.critical_points();
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i] < x && x < c[i + 1]) return static_cast<int>(i);
    return -1;
}

// Brute-force itinerary of x to length k; nullopt if the orbit meets C.
template <class R>
std::optional<pwmap::itinerary> raw_itinerary(const pwmap::piecewise_monotonic_map<R>& map,
                                              R x, std::size_t k) {
    pwmap::itinerary w;
    w.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        const int sym = raw_symbol(map, x);
        if (sym < 0) return std::nullopt;
        w.push_back(sym);
        x = map.evaluate_on(static_cast<std::size_t>(sym), x);
    }
    return w;
}

// Grid oracle for a cylinder: classify grid_n midpoints by brute itinerary
// and return the extent of the matching set (nullopt if no point matches).
inline std::optional<std::pair<double, double>>
grid_cylinder_oracle(const pwmap::piecewise_monotonic_map<double>& map, const pwmap::itinerary& word,
                     std::size_t grid_n) {
    double lo = 2, hi = -1;
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_n);
        const auto w = raw_itinerary(map, x, word.size());
        if (!w || *w != word) continue;
        if (x < lo) lo = x;
        if (x > hi) hi = x;
    }
    if (hi < lo) return std::nullopt;
    return std::make_pair(lo, hi);
}

// Independent W1 computation via the inverse-CDF (quantile) coupling:
// integral over u in (0,1) of |Q_a(u) - Q_b(u)|.
inline double w1_quantile_oracle(const pwmap::discrete_measure<double>& a,
                                 const pwmap::discrete_measure<double>& b) {
    double total = 0, prev = 0;
    std::size_t i = 0, j = 0;
    double ca = a.weights()[0], cb = b.weights()[0];
    for (;;) {
        const double u = std::min(ca, cb);
        total += (u - prev) * std::fabs(a.positions()[i] - b.positions()[j]);
        prev = u;
        const bool adva = ca <= cb, advb = cb <= ca;
        if (adva) {
            if (++i >= a.size()) break;
            ca += a.weights()[i];
        }
        if (advb) {
            if (++j >= b.size()) break;
            cb += b.weights()[j];
        }
    }
    return total;
}

// Dense proxy for Lebesgue measure on [0,1]: n atoms at cell midpoints.
inline pwmap::discrete_measure<double> uniform_grid_measure(std::size_t n) {
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        atoms.emplace_back((static_cast<double>(i) + 0.5) / static_cast<double>(n), 1.0);
    return pwmap::discrete_measure<double>::from_atoms(std::move(atoms));
}

inline pwmap::discrete_measure<double> random_measure(pwmap::splitmix64& rng,
                                                      std::size_t max_atoms) {
    const std::size_t k = 1 + rng.next() % max_atoms;
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        atoms.emplace_back(rng.uniform01(), 0.05 + rng.uniform01());
    return pwmap::discrete_measure<double>::from_atoms(std::move(atoms));
}

} // namespace testutil
