#pragma once

// Closed-form limits on counterfactual gain and a numerical search that
// checks how closely they are reached.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "cfq/counterfactual.hpp"
#include "cfq/errors.hpp"
#include "cfq/hilbert.hpp"
#include "cfq/line_search.hpp"
#include "cfq/scenarios.hpp"
#include "cfq/tolerances.hpp"

namespace cfq {

namespace detail {

inline void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0,1]");
}

}  // namespace detail

/// Largest gain reachable at absorption probability p:
/// (sqrt((4 - 3p) p) - p) / 2. Peaks at 1/3 for p = 1/3.
inline double max_gain_bound(double p_a) {
    detail::check_probability(p_a, "absorption probability");
    return 0.5 * (std::sqrt((4.0 - 3.0 * p_a) * p_a) - p_a);
}

/// Largest gain reachable without false positives (every gaining outcome is
/// dark in the absence of the absorber): p (1 - p).
inline double ev_gain_bound(double p_a) {
    detail::check_probability(p_a, "absorption probability");
    return p_a * (1.0 - p_a);
}

struct KdBoundCheck {
    double lhs = 0.0;  ///< |kd(a,m)|
    double rhs = 0.0;  ///< sqrt(P(m) ev(a,m))
    bool holds = true;
};

/// |kd(a,m)| <= sqrt(P(m) |<m|a>|^2 P(a)).
inline KdBoundCheck kd_bound_check(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    KdBoundCheck c;
    c.lhs = std::abs(kd_term(rho, a, m));
    c.rhs = std::sqrt(std::max(0.0, born_probability(rho, m).value * ev_term(rho, a, m)));
    c.holds = c.lhs <= c.rhs + tol::spectral;
    return c;
}

/// P(m) < ev(a,m) / 4. Sufficient (not necessary) for m to gain probability.
inline bool sufficient_gain_condition(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    return born_probability(rho, m).value < 0.25 * ev_term(rho, a, m);
}

enum class GainFamily {
    /// m1 = cos(t)|a> - sin(t)|b>, t in [0, pi/2]; bound: max_gain_bound.
    unrestricted,
    /// m1 orthogonal to psi (P(m1) = 0), tilted out of the (a, b) plane by
    /// an angle in [0, pi/2]; bound: ev_gain_bound.
    no_false_positives,
};

struct BoundResult {
    double p_a = 0.0;
    double bound_value = 0.0;
    double achieved_value = 0.0;
    bool saturated = false;
    double ratio = 1.0;   ///< achieved / bound (1 when the bound is zero)
    double angle = 0.0;   ///< optimal theta (unrestricted) or tilt (no false positives)
    std::size_t evaluations = 0;
    SingleOutputFamily witness;
};

namespace detail {

inline double family_gain(const SingleOutputFamily& f) {
    return counterfactual_gain(DensityMatrix::pure(f.psi), f.a, f.basis);
}

// cos(theta) = sqrt(1-p), sin(theta) = sqrt(p): the unique m1 in the (a, b)
// plane orthogonal to psi.
inline double dark_output_angle(double p_a) { return std::atan2(std::sqrt(p_a), std::sqrt(1.0 - p_a)); }

inline BoundResult finish(double p_a, double bound, const ScalarOptimum& best, SingleOutputFamily witness) {
    const double achieved = family_gain(witness);
    BoundResult r{p_a, bound, achieved, std::abs(bound - achieved) < tol::saturation,
                  bound > 0.0 ? achieved / bound : 1.0, best.x, best.evaluations, std::move(witness)};
    return r;
}

}  // namespace detail

/// Maximizes the gain over a one-parameter family of configurations at fixed
/// P(a) = p_a in dimension `dim`, by a grid of `grid_points` nodes refined with
/// golden-section search. Saturation is reported, not assumed.
inline BoundResult optimize_gain(double p_a, std::size_t dim, GainFamily family = GainFamily::unrestricted,
                                 std::size_t grid_points = 10001) {
    if (!(p_a > 0.0 && p_a < 1.0)) throw DomainError("optimize_gain needs P(a) in (0,1)");
    if (dim < 2) throw DomainError("optimize_gain needs at least two paths");
    if (grid_points < 2) throw DomainError("grid needs at least two points");

    if (family == GainFamily::unrestricted) {
        auto gain = [&](double theta) { return detail::family_gain(single_output_family(p_a, theta, dim)); };
        const ScalarOptimum best = grid_then_golden_max(gain, 0.0, std::numbers::pi / 2, grid_points);
        return detail::finish(p_a, max_gain_bound(p_a), best, single_output_family(p_a, best.x, dim));
    }

    const double theta = detail::dark_output_angle(p_a);
    if (dim == 2) {
        // The dark output is unique in two dimensions; nothing to search.
        ScalarOptimum only{0.0, 0.0, 1};
        return detail::finish(p_a, ev_gain_bound(p_a), only, single_output_family(p_a, theta, dim));
    }
    auto gain = [&](double alpha) { return detail::family_gain(single_output_family(p_a, theta, dim, alpha)); };
    const ScalarOptimum best = grid_then_golden_max(gain, 0.0, std::numbers::pi / 2, grid_points);
    return detail::finish(p_a, ev_gain_bound(p_a), best, single_output_family(p_a, theta, dim, best.x));
}

/// Unrestricted family, but only configurations whose special output has
/// P(m1) <= cap are admitted. Interpolates between the no-false-positive
/// and unrestricted cases; the shape of that interpolation is an output.
inline BoundResult optimize_gain_with_false_positive_cap(double p_a, std::size_t dim, double cap,
                                                         std::size_t grid_points = 10001) {
    if (!(p_a > 0.0 && p_a < 1.0)) throw DomainError("optimize_gain needs P(a) in (0,1)");
    if (!(cap >= 0.0 && cap <= 1.0)) throw DomainError("false-positive cap must lie in [0,1]");
    if (dim < 2) throw DomainError("optimize_gain needs at least two paths");
    const double dark = detail::dark_output_angle(p_a);
    auto gain = [&](double theta) {
        SingleOutputFamily f = single_output_family(p_a, theta, dim);
        if (born_probability(DensityMatrix::pure(f.psi), f.m1).value > cap + tol::tie_band) {
            return -std::numeric_limits<double>::infinity();
        }
        return detail::family_gain(f);
    };
    ScalarOptimum best = grid_then_golden_max(gain, 0.0, std::numbers::pi / 2, grid_points);
    // The dark-output configuration is always admissible; keep it if the grid
    // stepped over a narrow feasible window.
    const double at_dark = gain(dark);
    if (at_dark > best.value) {
        best.value = at_dark;
        best.x = dark;
    }
    return detail::finish(p_a, max_gain_bound(p_a), best, single_output_family(p_a, best.x, dim));
}

}  // namespace cfq
