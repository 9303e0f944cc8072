#pragma once

// Command implementations behind the `cfq` executable. Each command writes
// its result to `out`, diagnostics to `err`, and returns the process exit
// code: 0 success, 2 user input error, 3 internal consistency failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfq/bounds.hpp"
#include "cfq/counterfactual.hpp"
#include "cfq/discriminate.hpp"
#include "cfq/errors.hpp"
#include "cfq/fraction.hpp"
#include "cfq/io/format.hpp"
#include "cfq/io/interferometer_file.hpp"
#include "cfq/io/report_io.hpp"
#include "cfq/network.hpp"
#include "cfq/scenarios.hpp"

namespace cfq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

inline constexpr const char* kVersion = "0.1.0";

/// Tolerance for --self-check. Emitted values carry 12 significant digits,
/// so identities are re-checked a little above that rounding.
inline constexpr double kSelfCheckTolerance = 1e-10;

/// Tolerance for comparing scenario golden values.
inline constexpr double kScenarioTolerance = 1e-10;

enum class Command { report, scenario, sweep, optimize, discriminate };
enum class Format { table, json, csv };

struct RunConfig {
    Command command = Command::report;
    std::optional<std::string> input_path;
    std::optional<std::string> scenario_name;
    std::optional<std::string> block;
    std::optional<std::string> p_a;  ///< "p/q" or a decimal
    std::optional<std::size_t> paths;
    std::optional<std::string> grid;  ///< "start:stop:steps"
    std::optional<double> fp_cap;
    bool restrict_ev = false;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    Format output_format = Format::table;
    std::optional<std::string> output_path;
    bool self_check = false;
};

/// Bad or missing options; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

inline ProbabilityArg parse_probability(const std::string& text) {
    if (auto f = Fraction::parse(text)) {
        if (f->value() < 0.0 || f->value() > 1.0) throw UsageError("--pa must lie in [0,1], got " + text);
        return *f;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw UsageError("cannot parse --pa '" + text + "'");
        if (!(v >= 0.0 && v <= 1.0)) throw UsageError("--pa must lie in [0,1], got " + text);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse --pa '" + text + "'");
    }
}

struct Grid {
    double start = 0.0;
    double stop = 1.0;
    std::size_t steps = 12;

    std::vector<double> points() const {
        std::vector<double> out;
        for (std::size_t k = 0; k <= steps; ++k) {
            out.push_back(k == steps ? stop : start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps));
        }
        return out;
    }
};

/// "start:stop:steps" with steps >= 1 intervals, 0 <= start <= stop <= 1.
inline Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("--grid expects start:stop:steps, got '" + text + "'");
    Grid g;
    try {
        std::size_t used = 0;
        g.start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("start");
        g.stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("stop");
        const long long steps = std::stoll(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("steps");
        if (steps < 1) throw UsageError("--grid is empty: steps must be at least 1");
        g.steps = static_cast<std::size_t>(steps);
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse --grid '" + text + "'");
    }
    if (!(g.start >= 0.0 && g.stop <= 1.0)) throw UsageError("--grid must stay within [0,1]");
    if (g.start > g.stop) throw UsageError("--grid is empty: start exceeds stop");
    return g;
}

inline void validate(const RunConfig& c) {
    auto forbid = [&](bool present, const char* flag, const char* cmd) {
        if (present) throw UsageError(std::string(flag) + " is not used by '" + cmd + "'");
    };
    switch (c.command) {
        case Command::report:
            if (c.input_path.has_value() == c.scenario_name.has_value()) {
                throw UsageError("report needs exactly one of --input or --scenario");
            }
            if (c.input_path && !c.block) throw UsageError("report --input needs --block <tagged path>");
            break;
        case Command::scenario:
            if (!c.scenario_name) throw UsageError("scenario needs --scenario");
            forbid(c.input_path.has_value(), "--input", "scenario");
            break;
        case Command::sweep:
            forbid(c.scenario_name.has_value(), "--scenario", "sweep");
            forbid(c.input_path.has_value(), "--input", "sweep");
            break;
        case Command::optimize:
            if (!c.p_a) throw UsageError("optimize needs --pa");
            forbid(c.scenario_name.has_value(), "--scenario", "optimize");
            break;
        case Command::discriminate:
            if (!c.scenario_name) throw UsageError("discriminate needs --scenario");
            if (c.trials < 1) throw UsageError("--trials must be at least 1");
            break;
    }
    if (c.paths && *c.paths < 2) throw UsageError("--paths must be at least 2");
    if (c.fp_cap && !(*c.fp_cap >= 0.0 && *c.fp_cap <= 1.0)) throw UsageError("--fp-cap must lie in [0,1]");
}

namespace detail {

inline Scenario resolve_scenario(const RunConfig& c) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), *c.scenario_name) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw UsageError("unknown scenario '" + *c.scenario_name + "' (known: " + list + ")");
    }
    std::optional<ProbabilityArg> p;
    if (c.p_a) p = parse_probability(*c.p_a);
    try {
        return make_scenario(*c.scenario_name, p, c.paths);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

struct Analysis {
    GainSummary summary;
    std::string source;
    std::string blocked;
};

inline Analysis analyse_input(const RunConfig& c) {
    const io::InterferometerDocument doc = io::load_interferometer(*c.input_path);
    const InterferometerSpec& spec = doc.spec;
    if (spec.find_path(*c.block) == nullptr) {
        throw UsageError("--block '" + *c.block + "' is not a tagged path in " + *c.input_path);
    }
    const PureState input = normalize(std::span<const Amplitude>(doc.input));
    const DensityMatrix rho = DensityMatrix::pure(propagate(spec, input));
    const PureState a = backpropagate_path(spec, *c.block).vector;
    std::vector<LabeledState> outs;
    for (auto& [label, state] : output_basis(spec)) outs.push_back({label, state});
    std::vector<LabeledState> probes;
    for (const auto& p : spec.tagged_paths) {
        if (p.name != *c.block) probes.push_back({p.name, backpropagate_path(spec, p).vector});
    }
    return {full_report(rho, a, OutcomeBasis::make(std::move(outs)), probes), *c.input_path, *c.block};
}

inline Analysis analyse_scenario(const RunConfig& c) {
    const Scenario s = resolve_scenario(c);
    if (c.block && *c.block != s.a_label) {
        throw UsageError("scenario '" + s.name + "' blocks path '" + s.a_label + "', not '" + *c.block + "'");
    }
    return {s.report(), s.name, s.a_label};
}

inline int self_check(const std::string& emitted_json, std::ostream& err) {
    const GainSummary parsed = io::summary_from_json(io::Json::parse(emitted_json));
    const auto bad = check_identities(parsed, kSelfCheckTolerance);
    for (const auto& b : bad) err << "self-check failed: " << b << '\n';
    return bad.empty() ? kExitOk : kExitInternal;
}

inline std::string family_name(bool restrict_ev) { return restrict_ev ? "no_false_positives" : "unrestricted"; }

}  // namespace detail

inline int cmd_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const detail::Analysis an = c.input_path ? detail::analyse_input(c) : detail::analyse_scenario(c);
    const std::string json = io::to_json(an.summary, an.source, an.blocked).dump(2);
    switch (c.output_format) {
        case Format::json: out << json << '\n'; break;
        case Format::csv: io::write_report_csv(out, an.summary); break;
        case Format::table: io::write_report_table(out, an.summary, an.source, an.blocked); break;
    }
    if (c.self_check) return detail::self_check(json, err);
    return kExitOk;
}

/// Reproduces a named scenario and compares every golden value.
inline int cmd_scenario(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Scenario s = detail::resolve_scenario(c);
    const GainSummary report = s.report();
    io::Json rows = io::Json::array();
    bool all_ok = true;
    for (const auto& e : s.expected) {
        const std::optional<double> got = lookup_quantity(report, e.key);
        const bool ok = got && std::abs(*got - e.value) <= kScenarioTolerance;
        all_ok = all_ok && ok;
        rows.push_back(io::Json{{"quantity", e.key},
                                {"exact", e.exact ? e.exact->str() : ""},
                                {"expected", io::number(e.value)},
                                {"computed", got ? io::Json(io::number(*got)) : io::Json(nullptr)},
                                {"ok", ok}});
    }
    switch (c.output_format) {
        case Format::json:
            out << io::Json{{"scenario", s.name}, {"blocked", s.a_label}, {"all_ok", all_ok}, {"checks", rows}}.dump(2)
                << '\n';
            break;
        case Format::csv:
            out << "quantity,exact,expected,computed,ok\n";
            for (const auto& r : rows) {
                out << r["quantity"].get<std::string>() << ',' << r["exact"].get<std::string>() << ','
                    << io::format_number(r["expected"].get<double>()) << ','
                    << (r["computed"].is_null() ? "" : io::format_number(r["computed"].get<double>())) << ','
                    << (r["ok"].get<bool>() ? "true" : "false") << '\n';
            }
            break;
        case Format::table:
            out << "scenario: " << s.name << "    blocked path: " << s.a_label << "\n\n";
            for (const auto& r : rows) {
                const std::string exact = r["exact"].get<std::string>();
                out << io::detail::pad(r["quantity"].get<std::string>(), 28) << io::detail::pad(exact, 8)
                    << io::detail::pad(r["computed"].is_null() ? "missing"
                                                               : io::format_number(r["computed"].get<double>(), 6),
                                       14)
                    << (r["ok"].get<bool>() ? "ok" : "MISMATCH") << '\n';
            }
            out << '\n' << (all_ok ? "all golden values reproduced" : "golden values NOT reproduced") << '\n';
            break;
    }
    if (!all_ok) err << "scenario '" << s.name << "' does not reproduce its golden values\n";
    return all_ok ? kExitOk : kExitInternal;
}

inline std::vector<io::SweepRow> sweep_rows(const Grid& g, std::size_t dim, std::optional<double> fp_cap,
                                            std::size_t grid_points = 10001) {
    std::vector<io::SweepRow> rows;
    for (double p : g.points()) {
        io::SweepRow r;
        r.p_a = p;
        r.max_bound = max_gain_bound(p);
        r.ev_bound = ev_gain_bound(p);
        if (p > 0.0 && p < 1.0) {
            const BoundResult b = optimize_gain(p, dim, GainFamily::unrestricted, grid_points);
            r.achieved = b.achieved_value;
            r.saturated = b.saturated;
            if (fp_cap) r.capped_achieved = optimize_gain_with_false_positive_cap(p, dim, *fp_cap, grid_points).achieved_value;
        } else {
            // No absorber (p = 0) or nothing survives (p = 1): the gain is zero.
            r.achieved = 0.0;
            r.saturated = true;
            if (fp_cap) r.capped_achieved = 0.0;
        }
        rows.push_back(r);
    }
    return rows;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream&) {
    const Grid g = parse_grid(c.grid.value_or("0:1:12"));
    const auto rows = sweep_rows(g, c.paths.value_or(9), c.fp_cap);
    switch (c.output_format) {
        case Format::json: out << io::to_json(rows, c.fp_cap.has_value()).dump(2) << '\n'; break;
        case Format::csv: io::write_sweep_csv(out, rows, c.fp_cap.has_value()); break;
        case Format::table: {
            using io::detail::pad;
            auto f = [](double x) { return io::format_number(x, io::kTableDigits); };
            out << pad("P(a)", 10) << pad("max bound", 12) << pad("EV bound", 12) << pad("achieved", 12) << "saturated";
            if (c.fp_cap) out << "  capped";
            out << '\n';
            for (const auto& r : rows) {
                out << pad(f(r.p_a), 10) << pad(f(r.max_bound), 12) << pad(f(r.ev_bound), 12) << pad(f(r.achieved), 12)
                    << pad(r.saturated ? "yes" : "no", 9);
                if (c.fp_cap) out << "  " << f(r.capped_achieved.value_or(0.0));
                out << '\n';
            }
            break;
        }
    }
    return kExitOk;
}

inline int cmd_optimize(const RunConfig& c, std::ostream& out, std::ostream&) {
    const double p = std::visit([](auto v) { return to_double(v); }, parse_probability(*c.p_a));
    if (!(p > 0.0 && p < 1.0)) throw UsageError("optimize needs --pa strictly between 0 and 1");
    const std::size_t dim = c.paths.value_or(9);
    const BoundResult r = c.fp_cap ? optimize_gain_with_false_positive_cap(p, dim, *c.fp_cap)
                                   : optimize_gain(p, dim, c.restrict_ev ? GainFamily::no_false_positives
                                                                         : GainFamily::unrestricted);
    const std::string family = c.fp_cap ? "false_positive_cap" : detail::family_name(c.restrict_ev);
    switch (c.output_format) {
        case Format::json: out << io::to_json(r, dim, family).dump(2) << '\n'; break;
        case Format::csv:
            out << "p_a,dim,family,bound,achieved,ratio,saturated,angle\n"
                << io::format_number(r.p_a) << ',' << dim << ',' << family << ',' << io::format_number(r.bound_value)
                << ',' << io::format_number(r.achieved_value) << ',' << io::format_number(r.ratio) << ','
                << (r.saturated ? "true" : "false") << ',' << io::format_number(r.angle) << '\n';
            break;
        case Format::table: {
            auto f = [](double x) { return io::format_number(x, io::kTableDigits); };
            out << "P(a)       = " << f(r.p_a) << "\npaths      = " << dim << "\nfamily     = " << family
                << "\nbound      = " << f(r.bound_value) << "\nachieved   = " << f(r.achieved_value)
                << "\nratio      = " << io::format_number(r.ratio, 10) << "\nsaturated  = " << (r.saturated ? "yes" : "no")
                << "\nangle      = " << f(r.angle) << '\n';
            break;
        }
    }
    return kExitOk;
}

inline int cmd_discriminate(const RunConfig& c, std::ostream& out, std::ostream&) {
    const Scenario s = detail::resolve_scenario(c);
    const GameEstimate g = simulate_game(s, c.trials, c.seed, c.workers);
    switch (c.output_format) {
        case Format::json: out << io::to_json(g, s.name).dump(2) << '\n'; break;
        case Format::csv: io::write_game_csv(out, g, s.name); break;
        case Format::table: {
            auto f = [](double x) { return io::format_number(x, io::kTableDigits); };
            const double z = g.std_error > 0.0 ? (g.empirical_error - g.analytic_error) / g.std_error : 0.0;
            out << "scenario   = " << s.name << "\ntrials     = " << g.trials << "\nempirical  = " << f(g.empirical_error)
                << "\nanalytic   = " << f(g.analytic_error) << "\nsigma      = " << f(g.std_error)
                << "\ndeviation  = " << f(z) << " sigma\nseed       = " << g.seed << " (" << g.generator << ")\n";
            break;
        }
    }
    return kExitOk;
}

/// Validates and dispatches. Errors are reported on `err` and mapped to exit
/// codes; nothing escapes.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        validate(c);
        std::ofstream file;
        std::ostream* sink = &out;
        if (c.output_path) {
            file.open(*c.output_path);
            if (!file) throw UsageError("cannot open output file '" + *c.output_path + "'");
            sink = &file;
        }
        switch (c.command) {
            case Command::report: return cmd_report(c, *sink, err);
            case Command::scenario: return cmd_scenario(c, *sink, err);
            case Command::sweep: return cmd_sweep(c, *sink, err);
            case Command::optimize: return cmd_optimize(c, *sink, err);
            case Command::discriminate: return cmd_discriminate(c, *sink, err);
        }
        return kExitInternal;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownPath& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ZeroVector& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        // NonUnitaryComposition, failed invariants and anything unexpected.
        err << "internal consistency failure: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace cfq::cli
