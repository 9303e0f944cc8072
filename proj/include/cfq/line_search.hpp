#pragma once

// One-dimensional maximization: dense grid, then golden-section refinement
// inside the bracket around the best grid point.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "cfq/errors.hpp"

namespace cfq {

struct ScalarOptimum {
    double x = 0.0;
    double value = -std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
};

/// Golden-section search for a maximum of `f` on [lo, hi]. Assumes `f` is
/// unimodal there; returns the best point evaluated, not the bracket midpoint,
/// so a non-unimodal `f` still gets a value that was actually attained.
template <class F>
ScalarOptimum golden_section_max(F&& f, double lo, double hi, double xtol = 1e-13, int max_iterations = 200) {
    if (!(lo <= hi)) throw DomainError("golden-section bracket is inverted");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    ScalarOptimum best;
    auto eval = [&](double x) {
        const double v = f(x);
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = eval(c);
    double fd = eval(d);
    for (int i = 0; i < max_iterations && hi - lo > xtol; ++i) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = eval(d);
        }
    }
    eval(lo);
    eval(hi);
    return best;
}

/// Evaluates `f` on `points` equally spaced nodes of [lo, hi] (endpoints
/// included), then refines around the best node with golden-section search.
template <class F>
ScalarOptimum grid_then_golden_max(F&& f, double lo, double hi, std::size_t points = 10001, double xtol = 1e-13) {
    if (points < 2) throw DomainError("grid needs at least two points");
    if (!(lo <= hi)) throw DomainError("grid interval is inverted");
    const double step = (hi - lo) / static_cast<double>(points - 1);
    ScalarOptimum best;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < points; ++k) {
        const double x = k + 1 == points ? hi : lo + step * static_cast<double>(k);
        const double v = f(x);
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.x = x;
            best_k = k;
        }
    }
    const double a = best_k == 0 ? lo : lo + step * static_cast<double>(best_k - 1);
    const double b = best_k + 1 >= points ? hi : lo + step * static_cast<double>(best_k + 1);
    const ScalarOptimum refined = golden_section_max(f, a, b, xtol);
    best.evaluations += refined.evaluations;
    if (refined.value > best.value) {
        best.value = refined.value;
        best.x = refined.x;
    }
    return best;
}

}  // namespace cfq
