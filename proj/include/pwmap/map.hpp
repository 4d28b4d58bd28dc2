#pragma once

#include "pwmap/errors.hpp"
#include "pwmap/interval.hpp"
#include "pwmap/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace pwmap {

enum class branch_direction { increasing, decreasing };

// One monotone branch. Affine branches carry slope/intercept and are exact
// under the rational backend. General branches carry a forward evaluator
// that must extend continuously to the closed branch domain (it is called at
// the endpoints to compute one-sided image limits); inverses are bisected.
template <class R>
class branch_spec {
public:
    static branch_spec affine(R slope, R intercept) {
        if (slope == R(0)) throw validation_error("affine branch has zero slope");
        branch_spec b;
        b.affine_ = true;
        b.dir_ = slope > R(0) ? branch_direction::increasing : branch_direction::decreasing;
        b.slope_ = std::move(slope);
        b.intercept_ = std::move(intercept);
        return b;
    }

    static branch_spec general(std::function<R(R)> forward, branch_direction dir) {
        if (!forward) throw validation_error("general branch has no forward evaluator");
        branch_spec b;
        b.affine_ = false;
        b.dir_ = dir;
        b.forward_ = std::move(forward);
        return b;
    }

    bool is_affine() const { return affine_; }
    const R& slope() const { return slope_; }
    const R& intercept() const { return intercept_; }
    branch_direction direction() const { return dir_; }

    R forward(const R& x) const {
        if (affine_) return R(slope_ * x + intercept_);
        return forward_(x);
    }

private:
    branch_spec() = default;
    bool affine_ = true;
    branch_direction dir_ = branch_direction::increasing;
    R slope_{};
    R intercept_{};
    std::function<R(R)> forward_;
};

namespace detail {

template <class R>
void clamp_unit(R& y) {
    if constexpr (!scalar_traits<R>::exact) {
        if (y < R(0)) y = R(0);
        if (y > R(1)) y = R(1);
    }
}

} // namespace detail

// Piecewise monotone map of [0,1]: critical points 0 = c_0 < ... < c_N = 1
// with N > 1, strictly monotone continuous branches on the open pieces.
template <class R>
class piecewise_monotonic_map {
public:
    piecewise_monotonic_map(std::vector<R> critical_points, std::vector<branch_spec<R>> branches)
        : critical_(std::move(critical_points)), branches_(std::move(branches)) {
        validate();
        compute_images();
    }

    std::size_t branch_count() const { return branches_.size(); }
    const std::vector<R>& critical_points() const { return critical_; }
    const branch_spec<R>& branch(std::size_t i) const { return branches_[i]; }

    open_interval<R> branch_domain(std::size_t i) const {
        return open_interval<R>{critical_[i], critical_[i + 1]};
    }

    // Open image (one-sided limits at the domain endpoints), orientation-normalized.
    open_interval<R> branch_image(std::size_t i) const { return images_[i]; }

    bool all_affine() const {
        return std::all_of(branches_.begin(), branches_.end(),
                           [](const branch_spec<R>& b) { return b.is_affine(); });
    }

    R distance_to_critical(const R& x) const {
        auto it = std::lower_bound(critical_.begin(), critical_.end(), x);
        R best = it != critical_.end() ? abs_of<R>(*it - x) : R(1);
        if (it != critical_.begin()) best = std::min(best, abs_of<R>(x - *(it - 1)));
        return best;
    }

    // Index of the branch whose open domain contains x. Points outside [0,1]
    // are out-of-domain; points within the critical tolerance of C hit the
    // critical set (step information is filled in by iterate).
    std::size_t branch_of(const R& x) const {
        if (x < R(0) || x > R(1)) throw out_of_domain_error(to_double(x));
        if (distance_to_critical(x) <= scalar_traits<R>::critical_eps())
            throw critical_point_error(0, to_double(x));
        auto it = std::upper_bound(critical_.begin(), critical_.end(), x);
        return static_cast<std::size_t>(it - critical_.begin()) - 1;
    }

    R evaluate(const R& x) const { return evaluate_on(branch_of(x), x); }

    // Branch application without the domain lookup; the caller has already
    // placed x on branch i (or its closure).
    R evaluate_on(std::size_t i, const R& x) const {
        R y = branches_[i].forward(x);
        detail::clamp_unit(y);
        return y;
    }

    // Inverse of branch i at y in the open branch image.
    R invert_branch(std::size_t i, const R& y) const {
        if (!images_[i].contains(y))
            throw not_in_branch_image_error("value outside the open image of branch " +
                                            std::to_string(i));
        return invert_in_closure(i, y);
    }

    // Inverse over the closed image: endpoints map to domain endpoints.
    // Used by interval pullbacks, which clamp to the image first.
    R invert_in_closure(std::size_t i, const R& y) const {
        const branch_spec<R>& b = branches_[i];
        const bool inc = b.direction() == branch_direction::increasing;
        if (y <= images_[i].lo) return inc ? critical_[i] : critical_[i + 1];
        if (y >= images_[i].hi) return inc ? critical_[i + 1] : critical_[i];
        if (b.is_affine()) return R((y - b.intercept()) / b.slope());
        return bisect_inverse(i, y);
    }

    // Z_i intersect T_i^{-1}(target): the backward pullback step.
    open_interval<R> pull_back(std::size_t i, const open_interval<R>& target) const {
        open_interval<R> k = open_interval<R>::intersect(target, images_[i]);
        if (k.empty()) return open_interval<R>{R(0), R(0)};
        R a = invert_in_closure(i, k.lo);
        R b = invert_in_closure(i, k.hi);
        open_interval<R> pre = branches_[i].direction() == branch_direction::increasing
                                   ? open_interval<R>{a, b}
                                   : open_interval<R>{b, a};
        return open_interval<R>::intersect(pre, branch_domain(i));
    }

    // Image of an open subinterval of the closed branch domain.
    open_interval<R> push_forward(std::size_t i, const open_interval<R>& sub) const {
        if (sub.empty()) return open_interval<R>{R(0), R(0)};
        R a = branches_[i].forward(sub.lo);
        R b = branches_[i].forward(sub.hi);
        detail::clamp_unit(a);
        detail::clamp_unit(b);
        return branches_[i].direction() == branch_direction::increasing
                   ? open_interval<R>{a, b}
                   : open_interval<R>{b, a};
    }

private:
    void validate() const {
        if (critical_.size() < 3)
            throw validation_error("need N > 1 branches (at least three critical points)");
        if (branches_.size() + 1 != critical_.size())
            throw validation_error("branch count does not match critical points");
        if (!(critical_.front() == R(0)) || !(critical_.back() == R(1)))
            throw validation_error("critical points must start at 0 and end at 1");
        for (std::size_t i = 0; i + 1 < critical_.size(); ++i)
            if (!(critical_[i] < critical_[i + 1]))
                throw validation_error("critical points must be strictly increasing");
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            if (!branches_[i].is_affine()) {
                if constexpr (scalar_traits<R>::exact)
                    throw validation_error("general branches require the float backend");
                else
                    validate_general(i);
            }
        }
    }

    void validate_general(std::size_t i) const {
        const branch_spec<R>& b = branches_[i];
        const R lo = critical_[i], hi = critical_[i + 1];
        const R slack = scalar_traits<R>::image_slack();
        R prev = b.forward(lo);
        if (prev < R(0) - slack || prev > R(1) + slack)
            throw validation_error("branch value leaves [0,1]");
        // 33 interior sample points plus the endpoints: strict monotonicity
        // in the declared direction, values within [0,1].
        for (int j = 1; j <= 34; ++j) {
            R x = j == 34 ? hi : R(lo + (hi - lo) * R(j) / R(34));
            R y = b.forward(x);
            if (y < R(0) - slack || y > R(1) + slack)
                throw validation_error("branch value leaves [0,1]");
            const bool up = y > prev;
            if (y == prev || (up != (b.direction() == branch_direction::increasing)))
                throw validation_error("branch violates its declared monotonicity");
            prev = y;
        }
    }

    void compute_images() {
        const R slack = scalar_traits<R>::image_slack();
        images_.reserve(branches_.size());
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            R a = branches_[i].forward(critical_[i]);
            R b = branches_[i].forward(critical_[i + 1]);
            if (a > b) std::swap(a, b);
            if (a < R(0) - slack || b > R(1) + slack)
                throw validation_error("branch image leaves [0,1] on branch " + std::to_string(i));
            detail::clamp_unit(a);
            detail::clamp_unit(b);
            images_.push_back(open_interval<R>{a, b});
        }
    }

    R bisect_inverse(std::size_t i, const R& y) const {
        // Monotone bisection over the closed domain; the evaluator is only
        // called strictly inside. Fixed iteration count reaches ~1e-15 width.
        const bool inc = branches_[i].direction() == branch_direction::increasing;
        R lo = critical_[i], hi = critical_[i + 1];
        for (int it = 0; it < 100 && hi - lo > R(1e-15); ++it) {
            R mid = R((lo + hi) / R(2));
            R v = branches_[i].forward(mid);
            const bool go_right = inc ? (v < y) : (v > y);
            if (go_right)
                lo = mid;
            else
                hi = mid;
        }
        return R((lo + hi) / R(2));
    }

    std::vector<R> critical_;
    std::vector<branch_spec<R>> branches_;
    std::vector<open_interval<R>> images_;
};

// Width-collapse policy for float pullbacks: intervals thinner than the
// collapse tolerance are reported as empty with a flag.
template <class R>
bool apply_collapse_policy(open_interval<R>& iv) {
    if constexpr (!scalar_traits<R>::exact) {
        if (!iv.empty() && iv.length() <= scalar_traits<R>::collapse_eps()) {
            iv = open_interval<R>{R(0), R(0)};
            return true;
        }
    }
    return false;
}

} // namespace pwmap
