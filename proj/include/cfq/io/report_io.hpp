#pragma once

// Serialization of reports, optimizer results and game estimates.
//
// JSON carries 12 significant digits and keeps field order stable, so parsing
// an emitted document and dumping it again reproduces the same bytes.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfq/bounds.hpp"
#include "cfq/counterfactual.hpp"
#include "cfq/discriminate.hpp"
#include "cfq/io/format.hpp"

namespace cfq::io {

using Json = nlohmann::ordered_json;

inline Json number(double x) { return round_digits(x); }

inline Json to_json(const OutcomeReport& o) {
    return Json{{"label", o.label},
                {"p_m", number(o.p_m)},
                {"p_m_given_block", number(o.p_m_given_block)},
                {"kd", number(o.kd)},
                {"ev", number(o.ev)},
                {"chi_b", number(o.chi_b)},
                {"backaction_share", number(o.backaction_share)},
                {"removal_term", number(o.removal_term)},
                {"gain_contribution", number(o.gain_contribution)},
                {"contributes", o.contributes}};
}

/// `source` names what was analysed (scenario name or input file); `blocked`
/// is the label of the blocked path.
inline Json to_json(const GainSummary& s, const std::string& source, const std::string& blocked) {
    Json outcomes = Json::array();
    for (const auto& o : s.outcomes) outcomes.push_back(to_json(o));
    Json probes = Json::array();
    for (const auto& o : s.probes) probes.push_back(to_json(o));
    return Json{{"source", source},
                {"blocked", blocked},
                {"p_a", number(s.p_a)},
                {"delta_a", number(s.delta_a)},
                {"gain", number(s.gain)},
                {"p_error", number(s.p_error)},
                {"probability_warning", s.probability_warning},
                {"outcomes", std::move(outcomes)},
                {"probes", std::move(probes)}};
}

inline OutcomeReport outcome_from_json(const Json& j) {
    OutcomeReport o;
    o.label = j.at("label").get<std::string>();
    o.p_m = j.at("p_m").get<double>();
    o.p_m_given_block = j.at("p_m_given_block").get<double>();
    o.kd = j.at("kd").get<double>();
    o.ev = j.at("ev").get<double>();
    o.chi_b = j.at("chi_b").get<double>();
    o.backaction_share = j.at("backaction_share").get<double>();
    o.removal_term = j.at("removal_term").get<double>();
    o.gain_contribution = j.at("gain_contribution").get<double>();
    o.contributes = j.at("contributes").get<bool>();
    return o;
}

inline GainSummary summary_from_json(const Json& j) {
    GainSummary s;
    s.p_a = j.at("p_a").get<double>();
    s.delta_a = j.at("delta_a").get<double>();
    s.gain = j.at("gain").get<double>();
    s.p_error = j.at("p_error").get<double>();
    s.probability_warning = j.at("probability_warning").get<bool>();
    for (const auto& o : j.at("outcomes")) s.outcomes.push_back(outcome_from_json(o));
    for (const auto& o : j.at("probes")) s.probes.push_back(outcome_from_json(o));
    return s;
}

inline const char* kReportCsvHeader =
    "kind,label,p_m,p_m_given_block,kd,ev,chi_b,backaction_share,removal_term,gain_contribution,contributes";

/// One row per output port, then probes, then the absorption event.
inline void write_report_csv(std::ostream& os, const GainSummary& s) {
    os << kReportCsvHeader << '\n';
    auto row = [&](const char* kind, const OutcomeReport& o) {
        os << kind << ',' << o.label << ',' << format_number(o.p_m) << ',' << format_number(o.p_m_given_block) << ','
           << format_number(o.kd) << ',' << format_number(o.ev) << ',' << format_number(o.chi_b) << ','
           << format_number(o.backaction_share) << ',' << format_number(o.removal_term) << ','
           << format_number(o.gain_contribution) << ',' << (o.contributes ? "true" : "false") << '\n';
    };
    for (const auto& o : s.outcomes) row("outcome", o);
    for (const auto& o : s.probes) row("probe", o);
    os << "absorbed," << kAbsorbedLabel << ",0," << format_number(s.p_a) << ",,,,,,,\n";
}

namespace detail {

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace detail

inline void write_report_table(std::ostream& os, const GainSummary& s, const std::string& source,
                               const std::string& blocked) {
    using detail::pad;
    auto f = [](double x) { return format_number(x, kTableDigits); };
    os << "source: " << source << "    blocked path: " << blocked << "\n\n";
    const std::vector<std::string> head{"outcome", "P(m)", "P(m|X_a)", "KD", "EV", "chi_B", "chi_B/2", "gain"};
    for (const auto& h : head) os << pad(h, 11);
    os << '\n';
    auto row = [&](const OutcomeReport& o, const char* mark) {
        os << pad(o.label + mark, 11) << pad(f(o.p_m), 11) << pad(f(o.p_m_given_block), 11) << pad(f(o.kd), 11)
           << pad(f(o.ev), 11) << pad(f(o.chi_b), 11) << pad(f(o.backaction_share), 11) << f(o.gain_contribution)
           << '\n';
    };
    for (const auto& o : s.outcomes) row(o, o.contributes ? " *" : "");
    for (const auto& o : s.probes) row(o, " (probe)");
    os << pad(kAbsorbedLabel, 11) << pad("0", 11) << f(s.p_a) << "\n\n";
    os << "P(a)      = " << f(s.p_a) << '\n';
    os << "Delta_a   = " << f(s.delta_a) << '\n';
    os << "gain      = " << f(s.gain) << '\n';
    os << "P_error   = " << f(s.p_error) << '\n';
    if (s.probability_warning) os << "warning: a raw probability left [0,1] by more than rounding noise\n";
    os << "(* outcome gains probability with the absorber present)\n";
}

struct SweepRow {
    double p_a = 0.0;
    double max_bound = 0.0;
    double ev_bound = 0.0;
    double achieved = 0.0;
    bool saturated = true;
    std::optional<double> capped_achieved;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool with_cap) {
    os << "p_a,max_bound,ev_bound,optimizer_achieved,saturated";
    if (with_cap) os << ",capped_achieved";
    os << '\n';
    for (const auto& r : rows) {
        os << format_number(r.p_a) << ',' << format_number(r.max_bound) << ',' << format_number(r.ev_bound) << ','
           << format_number(r.achieved) << ',' << (r.saturated ? "true" : "false");
        if (with_cap) os << ',' << format_number(r.capped_achieved.value_or(0.0));
        os << '\n';
    }
}

inline Json to_json(const std::vector<SweepRow>& rows, bool with_cap) {
    Json out = Json::array();
    for (const auto& r : rows) {
        Json j{{"p_a", number(r.p_a)},
               {"max_bound", number(r.max_bound)},
               {"ev_bound", number(r.ev_bound)},
               {"optimizer_achieved", number(r.achieved)},
               {"saturated", r.saturated}};
        if (with_cap) j["capped_achieved"] = number(r.capped_achieved.value_or(0.0));
        out.push_back(std::move(j));
    }
    return out;
}

inline Json amplitudes_json(const PureState& s) {
    Json out = Json::array();
    for (std::size_t k = 0; k < s.dim(); ++k) out.push_back(Json::array({number(s[k].real()), number(s[k].imag())}));
    return out;
}

inline Json to_json(const BoundResult& r, std::size_t dim, const std::string& family) {
    return Json{{"p_a", number(r.p_a)},
                {"dim", dim},
                {"family", family},
                {"bound", number(r.bound_value)},
                {"achieved", number(r.achieved_value)},
                {"ratio", number(r.ratio)},
                {"saturated", r.saturated},
                {"angle", number(r.angle)},
                {"evaluations", r.evaluations},
                {"witness", Json{{"psi", amplitudes_json(r.witness.psi)},
                                 {"a", amplitudes_json(r.witness.a)},
                                 {"m1", amplitudes_json(r.witness.m1)}}}};
}

inline Json to_json(const GameEstimate& g, const std::string& scenario) {
    return Json{{"scenario", scenario},
                {"trials", g.trials},
                {"errors", g.errors},
                {"empirical", number(g.empirical_error)},
                {"analytic", number(g.analytic_error)},
                {"sigma", number(g.std_error)},
                {"seed", g.seed},
                {"generator", g.generator}};
}

inline const char* kGameCsvHeader = "scenario,trials,empirical,analytic,sigma,seed,generator";

inline void write_game_csv(std::ostream& os, const GameEstimate& g, const std::string& scenario) {
    os << kGameCsvHeader << '\n'
       << scenario << ',' << g.trials << ',' << format_number(g.empirical_error) << ','
       << format_number(g.analytic_error) << ',' << format_number(g.std_error) << ',' << g.seed << ','
       << g.generator << '\n';
}

}  // namespace cfq::io
