#pragma once

// Dense finite-dimensional state and operator arithmetic.
//
// States and operators are small (a handful of paths), so everything is a
// dense Eigen matrix. Values are immutable after construction and all free
// functions are pure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfq/errors.hpp"
#include "cfq/tolerances.hpp"

namespace cfq {

using Amplitude = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline bool is_hermitian(const Matrix& m, double tol = tol::algebraic) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Matrix& u, double tol = tol::spectral) {
    if (u.rows() != u.cols() || !u.allFinite()) return false;
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tol;
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

/// Unit-norm amplitude vector over a labelled basis.
class PureState {
public:
    /// Wraps `v` after checking it already has unit norm.
    static PureState from_normalized(Vector v) {
        if (v.size() == 0) throw DimensionMismatch("pure state must have positive dimension");
        if (!v.allFinite()) throw InvalidState("pure state has non-finite amplitudes");
        const double n = v.norm();
        if (std::abs(n - 1.0) > tol::norm) {
            throw NotNormalized("pure state norm is " + std::to_string(n));
        }
        return PureState(std::move(v));
    }

    /// Computational basis vector |k> in dimension `dim`.
    static PureState basis(std::size_t dim, std::size_t k) {
        if (k >= dim) {
            throw IndexOutOfRange("basis index " + std::to_string(k) + " outside dimension " +
                                  std::to_string(dim));
        }
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(k)) = 1.0;
        return PureState(std::move(v));
    }

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    Amplitude operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    /// <this|other>
    Amplitude inner(const PureState& other) const {
        require_same_dim(dim(), other.dim(), "inner product");
        return amps_.dot(other.amps_);
    }

    /// |this><this|
    Matrix outer() const { return amps_ * amps_.adjoint(); }

private:
    explicit PureState(Vector v) : amps_(std::move(v)) {}
    Vector amps_;
};

/// Scales a raw amplitude vector to unit norm.
inline PureState normalize(const Vector& v) {
    if (v.size() == 0) throw DimensionMismatch("cannot normalize an empty vector");
    if (!v.allFinite()) throw InvalidState("cannot normalize a non-finite vector");
    const double n = v.norm();
    if (n < tol::zero_vector) throw ZeroVector("cannot normalize a zero vector");
    Vector out = v / n;
    // Re-scale once more so the stored norm is as close to 1 as doubles allow.
    out /= out.norm();
    return PureState::from_normalized(std::move(out));
}

inline PureState normalize(std::span<const Amplitude> amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
    return normalize(v);
}

inline PureState normalize(std::initializer_list<Amplitude> amps) {
    return normalize(std::span<const Amplitude>(amps.begin(), amps.size()));
}

/// Rotates the global phase so the first non-negligible amplitude is real
/// and positive. States are rays; this gives a unique representative.
inline PureState canonical_phase(const PureState& s) {
    const Vector& v = s.amplitudes();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol::spectral) {
            const Amplitude phase = std::conj(v(i)) / std::abs(v(i));
            return PureState::from_normalized(v * phase);
        }
    }
    return s;
}

/// Positive semidefinite, unit-trace Hermitian operator.
class DensityMatrix {
public:
    static DensityMatrix from_matrix(Matrix m) {
        if (m.rows() == 0 || m.rows() != m.cols()) {
            throw DimensionMismatch("density matrix must be square and non-empty");
        }
        if (!m.allFinite()) throw InvalidState("density matrix has non-finite entries");
        if (!is_hermitian(m, tol::algebraic)) throw InvalidState("density matrix is not Hermitian");
        const double tr = m.trace().real();
        if (std::abs(tr - 1.0) > tol::algebraic) {
            throw InvalidState("density matrix trace is " + std::to_string(tr));
        }
        // Symmetrize away the sub-tolerance anti-Hermitian residue.
        m = (0.5 * (m + m.adjoint())).eval();
        if (min_eigenvalue(m) < -tol::psd) throw InvalidState("density matrix is not positive semidefinite");
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix pure(const PureState& s) { return DensityMatrix(s.outer()); }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        if (dim == 0) throw DimensionMismatch("dimension must be positive");
        const auto n = static_cast<Eigen::Index>(dim);
        return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(dim));
    }

    /// Convex combination sum_k w_k |s_k><s_k|; weights are renormalized.
    static DensityMatrix mixture(std::span<const double> weights, std::span<const PureState> states) {
        if (weights.size() != states.size() || states.empty()) {
            throw DimensionMismatch("mixture needs one weight per state");
        }
        const std::size_t d = states.front().dim();
        const auto n = static_cast<Eigen::Index>(d);
        Matrix m = Matrix::Zero(n, n);
        double total = 0.0;
        for (std::size_t k = 0; k < states.size(); ++k) {
            require_same_dim(states[k].dim(), d, "mixture component");
            if (!(weights[k] >= 0.0)) throw DomainError("mixture weights must be non-negative");
            m += weights[k] * states[k].outer();
            total += weights[k];
        }
        if (total <= 0.0) throw DomainError("mixture weights sum to zero");
        return from_matrix(m / total);
    }

    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const Matrix& matrix() const { return rho_; }

    /// <u|rho|v>
    Amplitude element(const PureState& u, const PureState& v) const {
        require_same_dim(u.dim(), dim(), "matrix element");
        require_same_dim(v.dim(), dim(), "matrix element");
        return u.amplitudes().dot(rho_ * v.amplitudes());
    }

private:
    explicit DensityMatrix(Matrix m) : rho_(std::move(m)) {}
    Matrix rho_;
};

/// Orthogonal projector. Built only from orthonormal data, so idempotence
/// holds by construction and is checked on request.
class Projector {
public:
    static Projector onto(const PureState& s) { return Projector(s.outer(), 1); }

    static Projector onto(std::span<const PureState> orthonormal) {
        if (orthonormal.empty()) throw DimensionMismatch("projector needs at least one vector");
        const auto n = static_cast<Eigen::Index>(orthonormal.front().dim());
        Matrix p = Matrix::Zero(n, n);
        for (const auto& s : orthonormal) {
            require_same_dim(s.dim(), orthonormal.front().dim(), "projector component");
            p += s.outer();
        }
        Projector out(std::move(p), static_cast<int>(orthonormal.size()));
        if (!out.is_idempotent()) throw InvalidState("projector components are not orthonormal");
        return out;
    }

    /// 1 - P
    Projector complement() const {
        const auto n = entries_.rows();
        return Projector(Matrix::Identity(n, n) - entries_, static_cast<int>(n) - rank_);
    }

    const Matrix& entries() const { return entries_; }
    int rank() const { return rank_; }
    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }

    bool is_idempotent(double tol = tol::spectral) const {
        return (entries_ * entries_ - entries_).cwiseAbs().maxCoeff() <= tol && is_hermitian(entries_, tol);
    }

    /// P X P
    Matrix sandwich(const Matrix& x) const {
        require_same_dim(static_cast<std::size_t>(x.rows()), dim(), "projector sandwich");
        return entries_ * x * entries_;
    }

private:
    Projector(Matrix m, int rank) : entries_(std::move(m)), rank_(rank) {}
    Matrix entries_;
    int rank_;
};

/// A probability clamped to [0,1]. `out_of_bounds` records a raw value that
/// left the interval by more than rounding noise, which points to a logic
/// error upstream rather than floating-point drift.
struct Probability {
    double value = 0.0;
    bool out_of_bounds = false;

    operator double() const { return value; }  // NOLINT(google-explicit-constructor)
};

inline Probability clamp_probability(double raw) {
    Probability p;
    p.out_of_bounds = raw < -tol::probability_warning || raw > 1.0 + tol::probability_warning;
    p.value = std::clamp(raw, 0.0, 1.0);
    return p;
}

/// <m|X|m> for an arbitrary (possibly unnormalized) Hermitian operator X.
inline double expectation(const Matrix& x, const PureState& m) {
    require_same_dim(static_cast<std::size_t>(x.rows()), m.dim(), "expectation");
    return m.amplitudes().dot(x * m.amplitudes()).real();
}

/// Born rule probability <m|rho|m>.
inline Probability born_probability(const DensityMatrix& rho, const PureState& outcome) {
    require_same_dim(rho.dim(), outcome.dim(), "born_probability");
    return clamp_probability(expectation(rho.matrix(), outcome));
}

/// Result of removing the component along |a> with an ideal absorber.
struct Projection {
    Matrix survivor;      ///< (1-|a><a|) X (1-|a><a|), not renormalized
    Probability absorbed;  ///< <a|X|a>
};

/// Ideal absorber on |a>, applied to an arbitrary positive operator. This is
/// the form that composes: feeding `survivor` back in models a second block.
inline Projection project_out(const Matrix& x, const PureState& a) {
    require_same_dim(static_cast<std::size_t>(x.rows()), a.dim(), "project_out");
    const Projector keep = Projector::onto(a).complement();
    Projection out;
    out.survivor = keep.sandwich(x);
    out.absorbed = clamp_probability(expectation(x, a));
    return out;
}

inline Projection project_out(const DensityMatrix& rho, const PureState& a) {
    return project_out(rho.matrix(), a);
}

}  // namespace cfq
