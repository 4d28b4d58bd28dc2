#pragma once

#include "pwmap/map.hpp"
#include "pwmap/orbit.hpp"
#include "pwmap/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pwmap {

// Finitely supported probability measure on [0,1]. Atoms are kept sorted;
// construction merges positions that coincide (within the merge tolerance in
// float mode, exactly in rational mode) and normalizes the total mass to 1.
template <class R>
class discrete_measure {
public:
    static discrete_measure from_atoms(std::vector<std::pair<R, R>> atoms) {
        if (atoms.empty()) throw validation_error("measure needs at least one atom");
        for (const auto& [x, w] : atoms) {
            if (x < R(0) || x > R(1)) throw validation_error("atom outside [0,1]");
            if (w < R(0)) throw validation_error("negative atom weight");
        }
        std::sort(atoms.begin(), atoms.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const R eps = scalar_traits<R>::merge_eps();
        discrete_measure m;
        std::size_t i = 0;
        R total(0);
        while (i < atoms.size()) {
            // cluster atoms chained by gaps <= eps
            R wsum = atoms[i].second;
            R xw = R(atoms[i].first * atoms[i].second);
            std::size_t j = i + 1;
            while (j < atoms.size() && atoms[j].first - atoms[j - 1].first <= eps) {
                wsum += atoms[j].second;
                xw += atoms[j].first * atoms[j].second;
                ++j;
            }
            if (wsum > R(0)) {
                m.pos_.push_back(R(xw / wsum)); // weighted mean position
                m.w_.push_back(wsum);
                total += wsum;
            } else if (j == atoms.size() && m.pos_.empty()) {
                throw validation_error("measure has zero total mass");
            }
            i = j;
        }
        if (total <= R(0)) throw validation_error("measure has zero total mass");
        for (R& w : m.w_) w = R(w / total);
        return m;
    }

    static discrete_measure dirac(const R& x) {
        return from_atoms({{x, R(1)}});
    }

    std::size_t size() const { return pos_.size(); }
    const std::vector<R>& positions() const { return pos_; }
    const std::vector<R>& weights() const { return w_; }

    R total_weight() const {
        R s(0);
        for (const R& w : w_) s += w;
        return s;
    }

private:
    discrete_measure() = default;
    std::vector<R> pos_;
    std::vector<R> w_;
};

// Uniform weights on the orbit points after burn_in.
template <class R>
discrete_measure<R> empirical_measure(const orbit_trace<R>& trace, std::size_t burn_in) {
    if (burn_in >= trace.points.size())
        throw empty_after_burn_in_error("burn-in consumes the whole trace");
    std::vector<std::pair<R, R>> atoms;
    atoms.reserve(trace.points.size() - burn_in);
    for (std::size_t i = burn_in; i < trace.points.size(); ++i)
        atoms.emplace_back(trace.points[i], R(1));
    return discrete_measure<R>::from_atoms(std::move(atoms));
}

// Wasserstein-1 distance on [0,1]: the exact integral of |F_a - F_b| over
// the merged support (piecewise-constant CDFs).
template <class R>
R w1_distance(const discrete_measure<R>& a, const discrete_measure<R>& b) {
    const auto& pa = a.positions();
    const auto& pb = b.positions();
    R total(0), fa(0), fb(0);
    R prev(0);
    bool started = false;
    std::size_t i = 0, j = 0;
    while (i < pa.size() || j < pb.size()) {
        R t;
        if (i < pa.size() && (j == pb.size() || pa[i] <= pb[j]))
            t = pa[i];
        else
            t = pb[j];
        if (started && t > prev) total += abs_of<R>(fa - fb) * (t - prev);
        while (i < pa.size() && pa[i] == t) fa += a.weights()[i], ++i;
        while (j < pb.size() && pb[j] == t) fb += b.weights()[j], ++j;
        prev = t;
        started = true;
    }
    return total;
}

// Image measure under the map; atoms move by evaluate, then re-merge.
template <class R>
discrete_measure<R> pushforward(const piecewise_monotonic_map<R>& map,
                                const discrete_measure<R>& mu) {
    std::vector<std::pair<R, R>> atoms;
    atoms.reserve(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        atoms.emplace_back(map.evaluate(mu.positions()[i]), mu.weights()[i]);
    return discrete_measure<R>::from_atoms(std::move(atoms));
}

template <class R>
struct discrepancy_result {
    R value{};
    std::size_t boundary_atoms = 0; // atoms within tolerance of a cylinder endpoint
};

// max over depth-m cylinders Z of |mu(Z) - nu(Z)|, with open-interval masses.
template <class R>
discrepancy_result<R> cylinder_discrepancy(const piecewise_monotonic_map<R>& map,
                                           const discrete_measure<R>& mu,
                                           const discrete_measure<R>& nu, std::size_t m,
                                           std::size_t depth_cap = default_depth_cap) {
    std::vector<cylinder<R>> cyls = enumerate_cylinders(map, m, depth_cap);
    std::sort(cyls.begin(), cyls.end(), [](const cylinder<R>& a, const cylinder<R>& b) {
        return a.interval.lo < b.interval.lo;
    });
    std::vector<R> edges;
    edges.reserve(cyls.size() * 2);
    for (const auto& c : cyls) {
        edges.push_back(c.interval.lo);
        edges.push_back(c.interval.hi);
    }
    std::sort(edges.begin(), edges.end());
    const R eps = scalar_traits<R>::boundary_eps();

    discrepancy_result<R> out;
    auto flag_boundary = [&](const discrete_measure<R>& d) {
        for (const R& x : d.positions()) {
            auto it = std::lower_bound(edges.begin(), edges.end(), x);
            if (it != edges.end() && abs_of<R>(*it - x) <= eps) { ++out.boundary_atoms; continue; }
            if (it != edges.begin() && abs_of<R>(x - *(it - 1)) <= eps) ++out.boundary_atoms;
        }
    };
    flag_boundary(mu);
    flag_boundary(nu);

    auto mass_in = [](const discrete_measure<R>& d, const open_interval<R>& z) {
        const auto& p = d.positions();
        auto lo = std::upper_bound(p.begin(), p.end(), z.lo);
        auto hi = std::lower_bound(p.begin(), p.end(), z.hi);
        R s(0);
        for (auto it = lo; it != hi; ++it)
            s += d.weights()[static_cast<std::size_t>(it - p.begin())];
        return s;
    };
    for (const auto& c : cyls) {
        R diff = abs_of<R>(mass_in(mu, c.interval) - mass_in(nu, c.interval));
        if (diff > out.value) out.value = diff;
    }
    return out;
}

struct entropy_estimate {
    std::size_t block_length = 0;   // n
    double block_entropy_nats = 0;  // H_n
    double rate = 0;                // H_n / n
    std::size_t sample_size = 0;    // number of windows
    bool undersampled = false;      // stream shorter than 100 * N^(n/2)
};

namespace detail {

inline std::string symbols_to_bytes(const itinerary& stream) {
    std::string bytes;
    bytes.reserve(stream.size());
    for (int s : stream) {
        if (s < 0 || s > 255) throw validation_error("symbol out of byte range");
        bytes.push_back(static_cast<char>(static_cast<unsigned char>(s)));
    }
    return bytes;
}

// Counts of all length-n windows, returned in lexicographic block order so
// downstream float sums are order-deterministic.
inline std::vector<std::pair<std::string_view, std::uint64_t>>
window_counts(const std::string& bytes, std::size_t n, std::size_t windows) {
    std::unordered_map<std::string_view, std::uint64_t> counts;
    counts.reserve(windows / 4 + 8);
    for (std::size_t i = 0; i < windows; ++i)
        ++counts[std::string_view(bytes).substr(i, n)];
    std::vector<std::pair<std::string_view, std::uint64_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return sorted;
}

} // namespace detail

// Plug-in block entropy (nats) of overlapping length-n windows.
inline entropy_estimate block_entropy(const itinerary& stream, std::size_t n) {
    if (n == 0) throw validation_error("block length must be positive");
    if (stream.size() < n)
        throw block_too_long_error("block length " + std::to_string(n) +
                                   " exceeds stream length " + std::to_string(stream.size()));
    const std::string bytes = detail::symbols_to_bytes(stream);
    const std::size_t windows = stream.size() - n + 1;
    auto counts = detail::window_counts(bytes, n, windows);
    double h = 0;
    const double w = static_cast<double>(windows);
    for (const auto& [block, c] : counts) {
        const double p = static_cast<double>(c) / w;
        h -= p * std::log(p);
    }
    int alphabet = 0;
    for (int s : stream) alphabet = std::max(alphabet, s + 1);
    entropy_estimate e;
    e.block_length = n;
    e.block_entropy_nats = h;
    e.rate = h / static_cast<double>(n);
    e.sample_size = windows;
    e.undersampled =
        static_cast<double>(stream.size()) <
        100.0 * std::pow(static_cast<double>(std::max(alphabet, 1)), static_cast<double>(n) / 2.0);
    return e;
}

// Average conditional information of the next symbol given the previous n,
// under the empirical distribution of length-(n+1) windows (the length-n
// distribution is the prefix marginal of that same window set, which makes
// this exactly H_{n+1} - H_n for those two distributions, and exactly 0 for
// deterministic continuations).
inline double conditional_information(const itinerary& stream, std::size_t n) {
    if (stream.size() < n + 1)
        throw block_too_long_error("conditional block length " + std::to_string(n + 1) +
                                   " exceeds stream length " + std::to_string(stream.size()));
    const std::string bytes = detail::symbols_to_bytes(stream);
    const std::size_t windows = stream.size() - n;
    auto joint = detail::window_counts(bytes, n + 1, windows);
    // prefix counts over the same window starts
    std::unordered_map<std::string_view, std::uint64_t> prefix;
    prefix.reserve(joint.size());
    for (const auto& [block, c] : joint) prefix[block.substr(0, n)] += c;
    double total = 0;
    const double w = static_cast<double>(windows);
    for (const auto& [block, c] : joint) {
        const double pc = static_cast<double>(prefix[block.substr(0, n)]);
        total += (static_cast<double>(c) / w) *
                 (std::log(pc) - std::log(static_cast<double>(c)));
    }
    return total;
}

// Birkhoff average of log|T'| along the trace; defined for affine maps.
template <class R>
double lyapunov_entropy(const piecewise_monotonic_map<R>& map, const orbit_trace<R>& trace) {
    if (!map.all_affine())
        throw non_affine_error("Lyapunov estimator needs an affine map");
    if (trace.word.empty()) return 0;
    double sum = 0;
    for (int s : trace.word)
        sum += std::log(std::fabs(to_double(map.branch(static_cast<std::size_t>(s)).slope())));
    return sum / static_cast<double>(trace.word.size());
}

} // namespace pwmap
