#pragma once

#include "pwmap/map.hpp"

#include <cmath>
#include <vector>

namespace pwmap {

namespace detail {

inline double floor_of(double x) { return std::floor(x); }

inline rational floor_of(const rational& x) {
    bigint n = boost::multiprecision::numerator(x);
    bigint d = boost::multiprecision::denominator(x);
    bigint q;
    if (n >= 0)
        q = n / d;
    else
        q = bigint(-((-n + d - 1) / d));
    return rational(q);
}

} // namespace detail

// Symmetric tent with peak slope s at 1/2: s*x rising, s*(1-x) falling.
template <class R>
piecewise_monotonic_map<R> make_tent(const R& slope = R(2)) {
    if (!(slope > R(1)) || slope > R(2))
        throw validation_error("tent slope must lie in (1,2]");
    std::vector<R> crit{R(0), R(R(1) / R(2)), R(1)};
    std::vector<branch_spec<R>> branches;
    branches.push_back(branch_spec<R>::affine(slope, R(0)));
    branches.push_back(branch_spec<R>::affine(R(-slope), slope));
    return piecewise_monotonic_map<R>(std::move(crit), std::move(branches));
}

// Tent with independent slopes; peak at sr/(sl+sr) where both sides meet.
template <class R>
piecewise_monotonic_map<R> make_skew_tent(const R& sl, const R& sr) {
    if (!(sl > R(1)) || !(sr > R(1)))
        throw validation_error("skew tent slopes must exceed 1");
    R c = R(sr / (sl + sr));
    R peak = R(sl * c);
    if (peak > R(1)) throw validation_error("skew tent peak exceeds 1");
    std::vector<R> crit{R(0), c, R(1)};
    std::vector<branch_spec<R>> branches;
    branches.push_back(branch_spec<R>::affine(sl, R(0)));
    branches.push_back(branch_spec<R>::affine(R(-sr), sr));
    return piecewise_monotonic_map<R>(std::move(crit), std::move(branches));
}

// x -> beta*x + alpha (mod 1). alpha = 0 gives the plain beta-transformation.
template <class R>
piecewise_monotonic_map<R> make_mod_one(const R& beta, const R& alpha = R(0)) {
    if (!(beta > R(1))) throw validation_error("beta must exceed 1");
    if (alpha < R(0) || alpha >= R(1)) throw validation_error("alpha must lie in [0,1)");
    std::vector<R> crit{R(0)};
    // interior breakpoints (j - alpha)/beta for integers j in (alpha, alpha + beta)
    for (long j = 1;; ++j) {
        R x = R((R(j) - alpha) / beta);
        if (!(x < R(1))) break;
        if (x > R(0)) crit.push_back(x);
    }
    crit.push_back(R(1));
    std::vector<branch_spec<R>> branches;
    for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
        R mid = R((crit[i] + crit[i + 1]) / R(2));
        R shift = detail::floor_of(R(beta * mid + alpha));
        branches.push_back(branch_spec<R>::affine(beta, R(alpha - shift)));
    }
    return piecewise_monotonic_map<R>(std::move(crit), std::move(branches));
}

template <class R>
piecewise_monotonic_map<R> make_beta(const R& beta) {
    return make_mod_one(beta, R(0));
}

inline constexpr double golden_ratio = 1.6180339887498949;

// beta-transformation at the golden ratio; irrational slope, float only.
inline piecewise_monotonic_map<double> make_golden() {
    return make_beta<double>(golden_ratio);
}

} // namespace pwmap
