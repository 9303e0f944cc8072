#pragma once

// Output statistics with and without an ideal absorber on one path.
//
// For input rho, blocked path |a> and output |m>:
//
//   P(m)       = <m|rho|m>
//   P(a)       = <a|rho|a>
//   P(m|X_a)   = <m|(1-|a><a|) rho (1-|a><a|)|m>
//              = P(m) - 2 kd(a,m) + ev(a,m)
//   kd(a,m)    = Re[<m|a><a|rho|m>]         (Kirkwood-Dirac term)
//   ev(a,m)    = |<m|a>|^2 P(a)             (Elitzur-Vaidman term)
//   chi_B(m|a) = 2 (ev - kd)                (back-action)
//
// Absorption is treated as one more observable outcome with probability P(a)
// when the absorber is present and 0 otherwise.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfq/errors.hpp"
#include "cfq/hilbert.hpp"
#include "cfq/tolerances.hpp"

namespace cfq {

inline const std::string kAbsorbedLabel = "absorbed";

struct LabeledState {
    std::string label;
    PureState state;
};

/// Complete orthonormal set of labelled output states.
class OutcomeBasis {
public:
    static OutcomeBasis make(std::vector<LabeledState> outcomes) {
        if (outcomes.empty()) throw IncompleteBasis("outcome basis is empty");
        const std::size_t d = outcomes.front().state.dim();
        std::set<std::string> seen;
        for (const auto& o : outcomes) {
            require_same_dim(o.state.dim(), d, "outcome basis");
            if (o.label.empty()) throw LabelMismatch("outcome labels must be non-empty");
            if (o.label == kAbsorbedLabel) throw LabelMismatch("'" + kAbsorbedLabel + "' is reserved");
            if (!seen.insert(o.label).second) throw LabelMismatch("duplicate outcome label '" + o.label + "'");
        }
        const auto n = static_cast<Eigen::Index>(d);
        Matrix sum = Matrix::Zero(n, n);
        for (const auto& o : outcomes) sum += o.state.outer();
        if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::spectral) {
            throw IncompleteBasis("outcome projectors do not sum to the identity");
        }
        return OutcomeBasis(std::move(outcomes));
    }

    std::size_t size() const { return outcomes_.size(); }
    std::size_t dim() const { return outcomes_.front().state.dim(); }
    const LabeledState& operator[](std::size_t k) const { return outcomes_[k]; }
    const PureState& at(const std::string& label) const {
        for (const auto& o : outcomes_) {
            if (o.label == label) return o.state;
        }
        throw LabelMismatch("no outcome labelled '" + label + "'");
    }
    auto begin() const { return outcomes_.begin(); }
    auto end() const { return outcomes_.end(); }

private:
    explicit OutcomeBasis(std::vector<LabeledState> o) : outcomes_(std::move(o)) {}
    std::vector<LabeledState> outcomes_;
};

namespace detail {

inline void check_inputs(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    require_same_dim(a.dim(), rho.dim(), "blocked path");
    require_same_dim(m.dim(), rho.dim(), "outcome");
}

}  // namespace detail

/// Real part of the Kirkwood-Dirac quasiprobability of (a, m).
inline double kd_term(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    detail::check_inputs(rho, a, m);
    return (m.inner(a) * rho.element(a, m)).real();
}

/// Sequential-detection probability, first at a then at m.
inline double ev_term(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    detail::check_inputs(rho, a, m);
    return std::norm(m.inner(a)) * rho.element(a, a).real();
}

inline double backaction_total(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    return 2.0 * (ev_term(rho, a, m) - kd_term(rho, a, m));
}

/// The half of the back-action carried by photons that avoid a.
inline double backaction_share(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    return 0.5 * backaction_total(rho, a, m);
}

/// P(m|X_a), evaluated directly from the blocked operator.
inline Probability conditional_probability(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    detail::check_inputs(rho, a, m);
    return clamp_probability(expectation(project_out(rho, a).survivor, m));
}

/// True when outcome m becomes more likely with the absorber present:
/// ev(a,m) > 2 kd(a,m), decided outside a tie band.
inline bool gain_condition(const DensityMatrix& rho, const PureState& a, const PureState& m) {
    return ev_term(rho, a, m) - 2.0 * kd_term(rho, a, m) > tol::tie_band;
}

struct ConditionalDistribution {
    double p_a = 0.0;
    std::vector<std::string> labels;
    std::vector<double> p_given_block;

    std::optional<double> at(const std::string& label) const {
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (labels[k] == label) return p_given_block[k];
        }
        return std::nullopt;
    }
};

inline ConditionalDistribution conditional_distribution(const DensityMatrix& rho, const PureState& a,
                                                        const OutcomeBasis& basis) {
    require_same_dim(basis.dim(), rho.dim(), "outcome basis");
    require_same_dim(a.dim(), rho.dim(), "blocked path");
    const Projection blocked = project_out(rho, a);
    ConditionalDistribution out;
    out.p_a = blocked.absorbed;
    for (const auto& o : basis) {
        out.labels.push_back(o.label);
        out.p_given_block.push_back(clamp_probability(expectation(blocked.survivor, o.state)));
    }
    return out;
}

/// Total variation distance between {P(m)} and {P(a), P(m|X_a)}.
inline double statistical_distance(const DensityMatrix& rho, const PureState& a, const OutcomeBasis& basis) {
    const ConditionalDistribution blocked = conditional_distribution(rho, a, basis);
    double sum = blocked.p_a;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        sum += std::abs(born_probability(rho, basis[k].state) - blocked.p_given_block[k]);
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

/// Summed increases P(m|X_a) - P(m) over outcomes that gain probability.
inline double counterfactual_gain(const DensityMatrix& rho, const PureState& a, const OutcomeBasis& basis) {
    const ConditionalDistribution blocked = conditional_distribution(rho, a, basis);
    double gain = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double d = blocked.p_given_block[k] - born_probability(rho, basis[k].state);
        if (d > tol::tie_band) gain += d;
    }
    return gain;
}

struct OutcomeReport {
    std::string label;
    double p_m = 0.0;
    double p_m_given_block = 0.0;
    double kd = 0.0;
    double ev = 0.0;
    double chi_b = 0.0;             ///< full back-action 2(ev - kd)
    double backaction_share = 0.0;  ///< chi_b / 2
    double removal_term = 0.0;      ///< P(m) - kd; with the share this rebuilds P(m|X_a)
    double gain_contribution = 0.0;
    bool contributes = false;
};

struct GainSummary {
    double p_a = 0.0;
    double delta_a = 0.0;
    double gain = 0.0;
    double p_error = 0.5;
    std::vector<OutcomeReport> outcomes;
    /// Extra states (e.g. internal ports) evaluated the same way; they are not
    /// part of the outcome basis and do not enter delta_a or gain.
    std::vector<OutcomeReport> probes;
    bool probability_warning = false;

    const OutcomeReport* find(const std::string& label) const {
        for (const auto* list : {&outcomes, &probes}) {
            for (const auto& o : *list) {
                if (o.label == label) return &o;
            }
        }
        return nullptr;
    }
};

inline OutcomeReport outcome_report(const DensityMatrix& rho, const PureState& a, const LabeledState& m,
                                    bool* warning = nullptr) {
    OutcomeReport r;
    r.label = m.label;
    const Probability p = born_probability(rho, m.state);
    const Probability pb = conditional_probability(rho, a, m.state);
    if (warning != nullptr) *warning = *warning || p.out_of_bounds || pb.out_of_bounds;
    r.p_m = p;
    r.p_m_given_block = pb;
    r.kd = kd_term(rho, a, m.state);
    r.ev = ev_term(rho, a, m.state);
    r.chi_b = 2.0 * (r.ev - r.kd);
    r.backaction_share = 0.5 * r.chi_b;
    r.removal_term = r.p_m - r.kd;
    const double d = r.p_m_given_block - r.p_m;
    r.contributes = d > tol::tie_band;
    r.gain_contribution = r.contributes ? d : 0.0;
    return r;
}

inline GainSummary full_report(const DensityMatrix& rho, const PureState& a, const OutcomeBasis& basis,
                               const std::vector<LabeledState>& probes = {}) {
    require_same_dim(basis.dim(), rho.dim(), "outcome basis");
    require_same_dim(a.dim(), rho.dim(), "blocked path");
    GainSummary s;
    const Probability p_a = born_probability(rho, a);
    s.p_a = p_a;
    s.probability_warning = p_a.out_of_bounds;

    double abs_sum = s.p_a;
    for (const auto& m : basis) {
        OutcomeReport r = outcome_report(rho, a, m, &s.probability_warning);
        abs_sum += std::abs(r.p_m - r.p_m_given_block);
        s.gain += r.gain_contribution;
        s.outcomes.push_back(std::move(r));
    }
    for (const auto& m : probes) {
        require_same_dim(m.state.dim(), rho.dim(), "probe");
        s.probes.push_back(outcome_report(rho, a, m, &s.probability_warning));
    }
    s.delta_a = std::clamp(0.5 * abs_sum, 0.0, 1.0);
    s.p_error = 0.5 - 0.5 * s.delta_a;
    return s;
}

/// Re-derives every identity a GainSummary must satisfy and returns a
/// description of each violation. Empty means consistent.
inline std::vector<std::string> check_identities(const GainSummary& s, double tol = tol::algebraic) {
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) bad.push_back(what);
    };
    auto near = [&](double x, double y) { return std::abs(x - y) <= tol; };

    expect(s.delta_a >= -tol && s.delta_a <= 1.0 + tol, "delta_a outside [0,1]");
    expect(s.gain >= -tol, "negative gain");
    expect(near(s.p_error, 0.5 - 0.5 * s.delta_a), "p_error != 1/2 - delta_a/2");
    expect(near(s.gain, s.delta_a - s.p_a), "gain != delta_a - p_a");

    double sum_given = 0.0;
    double sum_kd = 0.0;
    double sum_chi = 0.0;
    double sum_gain = 0.0;
    double sum_p = 0.0;
    for (const auto* list : {&s.outcomes, &s.probes}) {
        for (const auto& o : *list) {
            const std::string at = " at '" + o.label + "'";
            expect(o.p_m >= -tol && o.p_m <= 1.0 + tol, "p_m outside [0,1]" + at);
            expect(o.p_m_given_block >= -tol && o.p_m_given_block <= 1.0 + tol, "p_m_given_block outside [0,1]" + at);
            expect(o.ev >= -tol, "negative ev" + at);
            expect(near(o.chi_b, 2.0 * (o.ev - o.kd)), "chi_b != 2(ev - kd)" + at);
            expect(near(o.backaction_share, 0.5 * o.chi_b), "backaction_share != chi_b/2" + at);
            expect(near(o.p_m_given_block, o.p_m - 2.0 * o.kd + o.ev), "P(m|X_a) != P(m) - 2kd + ev" + at);
            expect(near(o.p_m_given_block + o.ev, o.p_m + o.chi_b), "P(m|X_a) + ev != P(m) + chi_b" + at);
            expect(near(o.p_m_given_block, o.removal_term + o.backaction_share),
                   "P(m|X_a) != (P(m) - kd) + chi_b/2" + at);
            expect(near(o.gain_contribution, std::max(0.0, o.p_m_given_block - o.p_m)), "gain_contribution" + at);
        }
    }
    for (const auto& o : s.outcomes) {
        sum_given += o.p_m_given_block;
        sum_kd += o.kd;
        sum_chi += o.chi_b;
        sum_gain += o.gain_contribution;
        sum_p += o.p_m;
    }
    const double loose = std::max(tol, tol::spectral);
    expect(std::abs(sum_p - 1.0) <= loose, "sum of P(m) != 1");
    expect(std::abs(sum_given - (1.0 - s.p_a)) <= loose, "sum of P(m|X_a) != 1 - P(a)");
    expect(std::abs(sum_kd - s.p_a) <= loose, "sum of kd != P(a)");
    expect(std::abs(sum_chi) <= loose, "sum of chi_b != 0");
    expect(near(sum_gain, s.gain), "gain != sum of gain contributions");
    return bad;
}

}  // namespace cfq
