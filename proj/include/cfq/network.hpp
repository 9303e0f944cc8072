#pragma once

// Interferometers built from two-mode beamsplitters.
//
// Convention: an element on modes (i, j) acts as the identity except for the
// 2x2 block
//
//     [  cos t           e^{i phi} sin t ]
//     [ -e^{-i phi} sin t     cos t      ]
//
// on rows/columns (i, j). Amplitude vectors are columns and elements are
// applied left to right in sequence order, so the network unitary is
// U = U_{n-1} ... U_1 U_0 and maps input-path amplitudes to output amplitudes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cfq/errors.hpp"
#include "cfq/hilbert.hpp"
#include "cfq/tolerances.hpp"

namespace cfq {

struct BeamsplitterElement {
    std::size_t mode_i = 0;
    std::size_t mode_j = 1;
    double theta = 0.0;  ///< mixing angle, radians
    double phi = 0.0;    ///< relative phase, radians
};

/// An internal path worth naming: the mode `mode` just before element
/// `stage` is applied. `stage == elements.size()` names an output port.
struct TaggedPathSpec {
    std::string name;
    std::size_t stage = 0;
    std::size_t mode = 0;
};

/// A tagged path resolved to its state in the output basis.
struct TaggedPath {
    std::string name;
    std::size_t stage = 0;
    std::size_t mode = 0;
    PureState vector;
};

struct InterferometerSpec {
    std::size_t dim = 0;
    std::vector<BeamsplitterElement> elements;
    std::vector<std::string> input_labels;
    std::vector<std::string> output_labels;
    std::vector<TaggedPathSpec> tagged_paths;

    const TaggedPathSpec* find_path(const std::string& name) const {
        auto it = std::find_if(tagged_paths.begin(), tagged_paths.end(),
                               [&](const TaggedPathSpec& p) { return p.name == name; });
        return it == tagged_paths.end() ? nullptr : &*it;
    }

    std::string output_label(std::size_t k) const {
        return k < output_labels.size() ? output_labels[k] : std::to_string(k + 1);
    }
};

inline void validate_element(const BeamsplitterElement& e, std::size_t dim) {
    if (e.mode_i >= dim || e.mode_j >= dim) {
        throw IndexOutOfRange("beamsplitter modes (" + std::to_string(e.mode_i) + ", " +
                              std::to_string(e.mode_j) + ") outside dimension " + std::to_string(dim));
    }
    if (e.mode_i == e.mode_j) {
        throw IndexOutOfRange("beamsplitter must act on two distinct modes, got " + std::to_string(e.mode_i) +
                              " twice");
    }
}

inline Matrix element_unitary(const BeamsplitterElement& e, std::size_t dim) {
    validate_element(e, dim);
    const auto n = static_cast<Eigen::Index>(dim);
    const auto i = static_cast<Eigen::Index>(e.mode_i);
    const auto j = static_cast<Eigen::Index>(e.mode_j);
    const double c = std::cos(e.theta);
    const double s = std::sin(e.theta);
    const Amplitude phase = std::polar(1.0, e.phi);

    Matrix u = Matrix::Identity(n, n);
    u(i, i) = c;
    u(i, j) = phase * s;
    u(j, i) = -std::conj(phase) * s;
    u(j, j) = c;
    return u;
}

namespace detail {

inline void validate_spec(const InterferometerSpec& spec) {
    if (spec.dim == 0) throw DimensionMismatch("interferometer dimension must be positive");
    for (const auto& e : spec.elements) validate_element(e, spec.dim);
    for (const auto& p : spec.tagged_paths) {
        if (p.stage > spec.elements.size()) {
            throw UnknownPath("path '" + p.name + "' has stage " + std::to_string(p.stage) + " beyond " +
                              std::to_string(spec.elements.size()) + " elements");
        }
        if (p.mode >= spec.dim) {
            throw IndexOutOfRange("path '" + p.name + "' has mode " + std::to_string(p.mode) +
                                  " outside dimension " + std::to_string(spec.dim));
        }
    }
}

// Product of elements [first, elements.size()).
inline Matrix compose_from(const InterferometerSpec& spec, std::size_t first) {
    const auto n = static_cast<Eigen::Index>(spec.dim);
    Matrix u = Matrix::Identity(n, n);
    for (std::size_t k = first; k < spec.elements.size(); ++k) u = element_unitary(spec.elements[k], spec.dim) * u;
    return u;
}

}  // namespace detail

/// Total network unitary, checked for unitarity.
inline Matrix compose(const InterferometerSpec& spec) {
    detail::validate_spec(spec);
    Matrix u = detail::compose_from(spec, 0);
    if (!is_unitary(u, tol::spectral)) {
        throw NonUnitaryComposition("composed interferometer is not unitary (non-finite or corrupted elements)");
    }
    return u;
}

/// State in the output basis reached by unit amplitude on a tagged path.
inline TaggedPath backpropagate_path(const InterferometerSpec& spec, const TaggedPathSpec& path) {
    detail::validate_spec(spec);
    if (path.stage > spec.elements.size()) {
        throw UnknownPath("path '" + path.name + "' has stage beyond the element sequence");
    }
    if (path.mode >= spec.dim) throw IndexOutOfRange("path '" + path.name + "' mode outside dimension");
    const Matrix tail = detail::compose_from(spec, path.stage);
    if (!is_unitary(tail, tol::spectral)) throw NonUnitaryComposition("network tail is not unitary");
    Vector v = tail.col(static_cast<Eigen::Index>(path.mode));
    return TaggedPath{path.name, path.stage, path.mode, normalize(v)};
}

inline TaggedPath backpropagate_path(const InterferometerSpec& spec, const std::string& name) {
    const TaggedPathSpec* p = spec.find_path(name);
    if (p == nullptr) throw UnknownPath("no tagged path named '" + name + "'");
    return backpropagate_path(spec, *p);
}

/// Output-basis state produced by sending `input` (input-path amplitudes)
/// through the network.
inline PureState propagate(const InterferometerSpec& spec, const PureState& input) {
    require_same_dim(input.dim(), spec.dim, "propagate");
    const Matrix u = compose(spec);
    return normalize(Vector(u * input.amplitudes()));
}

/// Output basis vectors, labelled.
inline std::vector<std::pair<std::string, PureState>> output_basis(const InterferometerSpec& spec) {
    std::vector<std::pair<std::string, PureState>> out;
    out.reserve(spec.dim);
    for (std::size_t k = 0; k < spec.dim; ++k) out.emplace_back(spec.output_label(k), PureState::basis(spec.dim, k));
    return out;
}

/// Five-beamsplitter three-path interferometer.
///
/// Paths F, P2, S2 meet elements 3 and 4: F and P2 interfere into the dark
/// port D2 and output 2; D2 and S2 then split into outputs 1 and 3. The first
/// three elements make the whole network a swap of paths 1 and 2 (up to a
/// global sign), so an equal input superposition lands on equal output thirds.
/// Angles were solved numerically once (tools/solve_three_path.py) and frozen.
inline InterferometerSpec three_path_spec() {
    InterferometerSpec spec;
    spec.dim = 3;
    spec.elements = {
        {0, 1, -2.0344439357957027, 0.0},
        {1, 2, -2.721058318305828, 0.0},
        {0, 2, -0.6847192030022828, 0.0},
        {0, 1, -0.6154797086703873, 0.0},  // -atan(1/sqrt 2)
        {0, 2, std::numbers::pi / 4, 0.0},
    };
    spec.input_labels = {"1", "2", "3"};
    spec.output_labels = {"1", "2", "3"};
    spec.tagged_paths = {
        {"F", 3, 0},
        {"P2", 3, 1},
        {"S2", 3, 2},
        {"D2", 4, 0},
    };
    return spec;
}

}  // namespace cfq
