#pragma once

// Canonical configurations with golden expected values.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cfq/counterfactual.hpp"
#include "cfq/errors.hpp"
#include "cfq/fraction.hpp"
#include "cfq/hilbert.hpp"
#include "cfq/network.hpp"

namespace cfq {

struct ExpectedValue {
    std::string key;
    double value = 0.0;
    std::optional<Fraction> exact;
};

struct Scenario {
    std::string name;
    DensityMatrix rho;
    PureState a;
    std::string a_label;
    OutcomeBasis basis;
    std::vector<LabeledState> probes;
    std::vector<ExpectedValue> expected;
    std::optional<InterferometerSpec> network;

    GainSummary report() const { return full_report(rho, a, basis, probes); }
};

/// Bayesian probability that the absorber is present after observing an
/// outcome, under an equiprobable prior.
inline double posterior_present(double p_m, double p_m_given_block) {
    const double total = p_m + p_m_given_block;
    return total > 0.0 ? p_m_given_block / total : 0.5;
}

/// Resolves keys of the form "p_a", "delta_a", "gain", "p_error" or
/// "<label>.<field>" where field is one of the OutcomeReport members or
/// "posterior_present".
inline std::optional<double> lookup_quantity(const GainSummary& s, const std::string& key) {
    if (key == "p_a") return s.p_a;
    if (key == "delta_a") return s.delta_a;
    if (key == "gain") return s.gain;
    if (key == "p_error") return s.p_error;
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    const OutcomeReport* o = s.find(key.substr(0, dot));
    if (o == nullptr) return std::nullopt;
    const std::string field = key.substr(dot + 1);
    if (field == "p_m") return o->p_m;
    if (field == "p_m_given_block") return o->p_m_given_block;
    if (field == "kd") return o->kd;
    if (field == "ev") return o->ev;
    if (field == "chi_b") return o->chi_b;
    if (field == "backaction_share") return o->backaction_share;
    if (field == "removal_term") return o->removal_term;
    if (field == "gain_contribution") return o->gain_contribution;
    if (field == "posterior_present") return posterior_present(o->p_m, o->p_m_given_block);
    return std::nullopt;
}

namespace detail {

inline std::string output_label(std::size_t k) { return "m" + std::to_string(k + 1); }

template <class T>
void push_expected(std::vector<ExpectedValue>& out, std::string key, T v) {
    if constexpr (std::is_same_v<T, Fraction>) {
        out.push_back({std::move(key), v.value(), v});
    } else {
        out.push_back({std::move(key), static_cast<double>(v), std::nullopt});
    }
}

// Gram-Schmidt of `seed` against `against`; returns nullopt if nothing is left.
inline std::optional<Vector> orthogonalize(Vector seed, const std::vector<Vector>& against) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : against) seed -= u.dot(seed) * u;
    }
    const double n = seed.norm();
    if (n < 1e-6) return std::nullopt;
    return Vector(seed / n);
}

// Real orthogonal k x k matrix whose first row is uniform: the Householder
// reflection exchanging e_0 and (1,...,1)/sqrt(k).
inline Eigen::MatrixXd uniform_row_reflection(std::size_t k) {
    const auto n = static_cast<Eigen::Index>(k);
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, -1.0 / std::sqrt(static_cast<double>(k)));
    v(0) += 1.0;
    const double vv = v.squaredNorm();
    if (vv < 1e-30) return Eigen::MatrixXd::Identity(n, n);
    return Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose() / vv;
}

}  // namespace detail

/// Completes `special` to an outcome basis in which the component of `psi`
/// orthogonal to `special` is shared equally by the remaining outputs.
///
/// The remaining outputs start from w (psi with its `special` component
/// removed) followed by canonical basis vectors Gram-Schmidt'ed against
/// {special, `span`..., w}; a reflection with uniform first row then spreads
/// w evenly. Vectors in `span` are orthogonalized first so the auxiliary
/// directions avoid them; with span = {a, b} the blocked-state component is
/// shared equally as well.
inline OutcomeBasis uniform_completion(const PureState& special, const PureState& psi,
                                       const std::vector<PureState>& span = {}) {
    const std::size_t d = special.dim();
    require_same_dim(psi.dim(), d, "uniform_completion");
    std::vector<Vector> fixed{special.amplitudes()};
    if (auto w = detail::orthogonalize(psi.amplitudes(), fixed)) fixed.push_back(*w);

    std::vector<Vector> avoid = fixed;
    for (const auto& s : span) {
        if (auto v = detail::orthogonalize(s.amplitudes(), avoid)) avoid.push_back(*v);
    }
    std::vector<Vector> aux;
    auto fill = [&](const std::vector<Vector>& excluded) {
        for (std::size_t k = 0; k < d && fixed.size() + aux.size() < d; ++k) {
            std::vector<Vector> against = excluded;
            against.insert(against.end(), aux.begin(), aux.end());
            if (auto v = detail::orthogonalize(PureState::basis(d, k).amplitudes(), against)) aux.push_back(*v);
        }
    };
    fill(avoid);
    // Whatever `span` directions survived are still free for the completion.
    fill(fixed);
    if (fixed.size() + aux.size() != d) throw InvalidState("failed to complete outcome basis");

    std::vector<Vector> rest(fixed.begin() + 1, fixed.end());
    rest.insert(rest.end(), aux.begin(), aux.end());
    const Eigen::MatrixXd h = detail::uniform_row_reflection(rest.size());
    std::vector<LabeledState> out;
    out.push_back({detail::output_label(0), special});
    for (std::size_t i = 0; i < rest.size(); ++i) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
        for (std::size_t j = 0; j < rest.size(); ++j) {
            v += h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * rest[j];
        }
        out.push_back({detail::output_label(i + 1), normalize(v)});
    }
    return OutcomeBasis::make(std::move(out));
}

/// Blocked path |a> = |0> and its complement |b>, the uniform superposition
/// of the other n-1 paths.
inline std::pair<PureState, PureState> blocked_pair(std::size_t n) {
    if (n < 2) throw DomainError("need at least two paths");
    Vector b = Vector::Constant(static_cast<Eigen::Index>(n), 1.0);
    b(0) = 0.0;
    return {PureState::basis(n, 0), normalize(b)};
}

/// psi = sqrt(p)|a> + sqrt(1-p)|b> with special output
/// m1 = cos(alpha)(cos(theta)|a> - sin(theta)|b>) + sin(alpha)|c>,
/// where |c> is orthogonal to both |a> and |b> (needs n >= 3 when alpha != 0).
/// The other n-1 outputs come from uniform_completion.
struct SingleOutputFamily {
    PureState psi;
    PureState a;
    PureState m1;
    OutcomeBasis basis;
};

inline SingleOutputFamily single_output_family(double p_a, double theta, std::size_t n, double alpha = 0.0) {
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw DomainError("absorption probability outside [0,1]");
    if (n < 2) throw DomainError("need at least two outputs");
    const auto [a, b] = blocked_pair(n);
    const Vector psi = std::sqrt(p_a) * a.amplitudes() + std::sqrt(1.0 - p_a) * b.amplitudes();
    Vector m1 = std::cos(theta) * a.amplitudes() - std::sin(theta) * b.amplitudes();
    if (std::abs(std::sin(alpha)) > 0.0) {
        if (n < 3) throw DomainError("tilting the special output needs at least three paths");
        Vector c = Vector::Zero(static_cast<Eigen::Index>(n));
        c(1) = 1.0;
        c(2) = -1.0;
        m1 = std::cos(alpha) * m1 + std::sin(alpha) * (c / std::sqrt(2.0));
    }
    PureState psi_state = normalize(psi);
    PureState m1_state = normalize(m1);
    OutcomeBasis basis = uniform_completion(m1_state, psi_state, {a, b});
    return {std::move(psi_state), a, std::move(m1_state), std::move(basis)};
}

template <class T>
std::vector<ExpectedValue> ev_expectations(T p, std::size_t n) {
    const T one{1};
    const T rest = T(static_cast<std::int64_t>(n - 1));
    const T gain = p * (one - p);
    std::vector<ExpectedValue> e;
    detail::push_expected(e, "p_a", p);
    detail::push_expected(e, "gain", gain);
    detail::push_expected(e, "delta_a", p + gain);
    detail::push_expected(e, "p_error", (one - p - gain) / T(2));
    detail::push_expected(e, "m1.p_m", T(0));
    detail::push_expected(e, "m1.kd", T(0));
    detail::push_expected(e, "m1.ev", gain);
    detail::push_expected(e, "m1.p_m_given_block", gain);
    detail::push_expected(e, "m1.chi_b", T(2) * gain);
    detail::push_expected(e, "m1.backaction_share", gain);
    detail::push_expected(e, "m1.gain_contribution", gain);
    for (std::size_t k = 1; k < n; ++k) {
        const std::string l = detail::output_label(k);
        detail::push_expected(e, l + ".p_m", one / rest);
        detail::push_expected(e, l + ".p_m_given_block", (one - p) * (one - p) / rest);
        detail::push_expected(e, l + ".gain_contribution", T(0));
    }
    return e;
}

/// Generalized Elitzur-Vaidman tester: one output is dark without the
/// absorber, the remaining n-1 outputs share the light equally.
template <class T>
Scenario ev_scenario(T p_a, std::size_t n_outputs) {
    const double p = to_double(p_a);
    if (!(p > 0.0 && p < 1.0)) throw DomainError("ev scenario needs P(a) in (0,1)");
    if (n_outputs < 2) throw DomainError("ev scenario needs at least two outputs");
    // cos(theta) = sqrt(1-p), sin(theta) = sqrt(p)
    const double theta = std::atan2(std::sqrt(p), std::sqrt(1.0 - p));
    SingleOutputFamily f = single_output_family(p, theta, n_outputs);
    return Scenario{"ev",
                    DensityMatrix::pure(f.psi),
                    f.a,
                    "a",
                    std::move(f.basis),
                    {},
                    ev_expectations(p_a, n_outputs),
                    std::nullopt};
}

/// Nine isotropic outputs where the absorber focuses light onto m1.
inline Scenario kd_scenario() {
    constexpr std::size_t n = 9;
    const Fraction p{1, 3};
    // cos(theta) = 1/sqrt(3), sin(theta) = sqrt(2/3)
    const double theta = std::atan2(std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0));
    SingleOutputFamily f = single_output_family(p.value(), theta, n);

    std::vector<ExpectedValue> e;
    auto put = [&](std::string k, Fraction v) { detail::push_expected(e, std::move(k), v); };
    put("p_a", p);
    put("gain", {1, 3});
    put("delta_a", {2, 3});
    put("p_error", {1, 6});
    put("m1.kd", {-1, 9});
    put("m1.ev", {1, 9});
    put("m1.p_m_given_block", {4, 9});
    put("m1.chi_b", {4, 9});
    put("m1.gain_contribution", {1, 3});
    put("m1.posterior_present", {4, 5});
    for (std::size_t k = 0; k < n; ++k) put(detail::output_label(k) + ".p_m", {1, 9});
    for (std::size_t k = 1; k < n; ++k) {
        put(detail::output_label(k) + ".p_m_given_block", {1, 36});
        put(detail::output_label(k) + ".posterior_present", {1, 5});
    }
    return Scenario{"kd9", DensityMatrix::pure(f.psi), f.a, "a", std::move(f.basis), {}, std::move(e), std::nullopt};
}

/// Five-beamsplitter three-path interferometer with path F blocked.
inline Scenario three_path_scenario() {
    InterferometerSpec spec = three_path_spec();
    const PureState input = normalize({1.0, 1.0, 1.0});
    const PureState n_f = canonical_phase(propagate(spec, input));
    const PureState f = canonical_phase(backpropagate_path(spec, "F").vector);
    const PureState d2 = canonical_phase(backpropagate_path(spec, "D2").vector);

    std::vector<LabeledState> outs;
    for (auto& [label, state] : output_basis(spec)) outs.push_back({label, state});

    std::vector<ExpectedValue> e;
    auto put = [&](std::string k, Fraction v) { detail::push_expected(e, std::move(k), v); };
    put("p_a", {1, 9});
    put("gain", {7, 27});
    put("delta_a", {10, 27});
    put("p_error", {17, 54});
    const Fraction kd[3] = {{1, 9}, {1, 9}, {-1, 9}};
    const Fraction given[3] = {{4, 27}, {4, 27}, {16, 27}};
    const Fraction removal[3] = {{2, 9}, {2, 9}, {4, 9}};
    const Fraction chi[3] = {{-4, 27}, {-4, 27}, {8, 27}};
    const Fraction share[3] = {{-2, 27}, {-2, 27}, {4, 27}};
    const Fraction gain[3] = {0, 0, {7, 27}};
    for (int k = 0; k < 3; ++k) {
        const std::string l = spec.output_label(static_cast<std::size_t>(k));
        put(l + ".p_m", {1, 3});
        put(l + ".kd", kd[k]);
        put(l + ".ev", {1, 27});
        put(l + ".p_m_given_block", given[k]);
        put(l + ".removal_term", removal[k]);
        put(l + ".chi_b", chi[k]);
        put(l + ".backaction_share", share[k]);
        put(l + ".gain_contribution", gain[k]);
    }
    put("D2.p_m", 0);
    put("D2.kd", 0);
    put("D2.ev", {2, 27});
    put("D2.p_m_given_block", {2, 27});
    put("D2.gain_contribution", {2, 27});

    return Scenario{"three-path",
                    DensityMatrix::pure(n_f),
                    f,
                    "F",
                    OutcomeBasis::make(std::move(outs)),
                    {{"D2", d2}},
                    std::move(e),
                    std::move(spec)};
}

/// Discrete Fourier outputs m_k = sum_j e^{2 pi i jk/n}|j>/sqrt(n).
inline OutcomeBasis fourier_outputs(std::size_t n) {
    std::vector<LabeledState> outs;
    const auto d = static_cast<Eigen::Index>(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vector v(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            v(j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                              2.0 * std::numbers::pi * static_cast<double>(j * static_cast<Eigen::Index>(k)) /
                                  static_cast<double>(n));
        }
        outs.push_back({detail::output_label(k), normalize(v)});
    }
    return OutcomeBasis::make(std::move(outs));
}

/// Particle-like limit: the photon is in an incoherent mixture of all paths.
inline Scenario classical_mixture_scenario(std::size_t n_paths) {
    if (n_paths < 2) throw DomainError("mixture scenario needs at least two paths");
    const auto n = static_cast<std::int64_t>(n_paths);
    std::vector<ExpectedValue> e;
    auto put = [&](std::string k, Fraction v) { detail::push_expected(e, std::move(k), v); };
    put("p_a", {1, n});
    put("gain", 0);
    put("delta_a", {1, n});
    put("p_error", {n - 1, 2 * n});
    for (std::size_t k = 0; k < n_paths; ++k) {
        const std::string l = detail::output_label(k);
        put(l + ".p_m", {1, n});
        put(l + ".p_m_given_block", {n - 1, n * n});
        put(l + ".kd", {1, n * n});
        put(l + ".ev", {1, n * n});
        put(l + ".chi_b", 0);
    }
    return Scenario{"mixture",
                    DensityMatrix::maximally_mixed(n_paths),
                    PureState::basis(n_paths, 0),
                    "a",
                    fourier_outputs(n_paths),
                    {},
                    std::move(e),
                    std::nullopt};
}

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"ev", "kd9", "three-path", "mixture"};
    return names;
}

using ProbabilityArg = std::variant<Fraction, double>;

/// Scenario by CLI name. `p_a` and `paths` only apply to "ev" (defaults 1/3
/// and 9) and "mixture" (paths, default 2).
inline Scenario make_scenario(const std::string& name, std::optional<ProbabilityArg> p_a = std::nullopt,
                              std::optional<std::size_t> paths = std::nullopt) {
    if (name == "ev") {
        const std::size_t n = paths.value_or(9);
        const ProbabilityArg p = p_a.value_or(Fraction{1, 3});
        return std::visit([&](auto v) { return ev_scenario(v, n); }, p);
    }
    if (name == "kd9") return kd_scenario();
    if (name == "three-path") return three_path_scenario();
    if (name == "mixture") return classical_mixture_scenario(paths.value_or(2));
    throw DomainError("unknown scenario '" + name + "'");
}

}  // namespace cfq
