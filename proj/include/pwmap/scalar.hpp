#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

namespace pwmap {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

// Numeric policy for the two backends. The float backend works with the
// documented tolerances; the exact backend compares exactly (eps = 0).
template <class R>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double critical_eps() { return 1e-12; }   // proximity to C that counts as a hit
    static double boundary_eps() { return 1e-12; }   // boundary-touch diagnostics, atom flags
    static double merge_eps() { return 1e-12; }      // duplicate-atom merging
    static double collapse_eps() { return 1e-15; }   // pullback width treated as collapsed
    static double image_slack() { return 1e-9; }     // allowed float overshoot past [0,1]
};

template <>
struct scalar_traits<rational> {
    static constexpr bool exact = true;
    static rational critical_eps() { return 0; }
    static rational boundary_eps() { return 0; }
    static rational merge_eps() { return 0; }
    static rational collapse_eps() { return 0; }
    static rational image_slack() { return 0; }
};

inline double to_double(double x) { return x; }
inline double to_double(const rational& x) { return x.convert_to<double>(); }

inline double from_double(double x, double) { return x; }
inline rational from_double(double x, const rational&) { return rational(x); }

template <class R>
R from_double_as(double x) {
    return from_double(x, R{});
}

template <class R>
R abs_of(const R& x) {
    return x < R(0) ? R(-x) : x;
}

} // namespace pwmap
