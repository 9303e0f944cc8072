// cfq: counterfactual gain reports, scenario reproduction, bound sweeps,
// optimization and Monte Carlo discrimination runs.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cfq/cli.hpp"

namespace {

struct Flags {
    std::string input;
    std::string scenario;
    std::string block;
    std::string pa;
    std::size_t paths = 0;
    std::string grid;
    double fp_cap = -1.0;
    bool restrict_ev = false;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string format = "table";
    std::string out;
    bool self_check = false;
    bool no_banner = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out", f.out, "Write output to this file instead of stdout");
    cmd->add_flag("--no-banner", f.no_banner, "Suppress the version banner on stderr");
}

}  // namespace

int main(int argc, char** argv) {
    using cfq::cli::Command;

    CLI::App app{"Counterfactual gain analysis for multi-path single-photon interferometers"};
    app.require_subcommand(1);
    Flags f;

    auto* report = app.add_subcommand("report", "Per-outcome report for a scenario or interferometer file");
    report->add_option("--scenario", f.scenario, "Scenario name: ev, kd9, three-path, mixture");
    report->add_option("--input", f.input, "Interferometer description file");
    report->add_option("--block", f.block, "Tagged path to block (required with --input)");
    report->add_option("--pa", f.pa, "Absorption probability for the ev scenario, e.g. 1/3 or 0.25");
    report->add_option("--paths", f.paths, "Number of paths/outputs for ev and mixture");
    report->add_flag("--self-check", f.self_check, "Re-verify all identities on the emitted report");
    add_common(report, f);

    auto* scenario = app.add_subcommand("scenario", "Reproduce a named scenario against its golden values");
    scenario->add_option("--scenario", f.scenario, "Scenario name")->required();
    scenario->add_option("--pa", f.pa, "Absorption probability for ev");
    scenario->add_option("--paths", f.paths, "Number of paths/outputs for ev and mixture");
    add_common(scenario, f);

    auto* sweep = app.add_subcommand("sweep", "Gain bounds and optimizer over a grid of absorption probabilities");
    sweep->add_option("--grid", f.grid, "start:stop:steps (steps = number of intervals)")->default_str("0:1:12");
    sweep->add_option("--paths", f.paths, "Number of outputs used by the optimizer (default 9)");
    sweep->add_option("--fp-cap", f.fp_cap, "Also optimize with P(m1) capped at this value");
    add_common(sweep, f);

    auto* optimize = app.add_subcommand("optimize", "Maximize counterfactual gain at a fixed absorption probability");
    optimize->add_option("--pa", f.pa, "Absorption probability")->required();
    optimize->add_option("--paths", f.paths, "Number of outputs (default 9)");
    optimize->add_flag("--restrict-ev", f.restrict_ev, "Only configurations without false positives");
    optimize->add_option("--fp-cap", f.fp_cap, "Cap on the false-positive probability P(m1)");
    add_common(optimize, f);

    auto* discriminate = app.add_subcommand("discriminate", "Monte Carlo run of the absorber guessing game");
    discriminate->add_option("--scenario", f.scenario, "Scenario name")->required();
    discriminate->add_option("--pa", f.pa, "Absorption probability for ev");
    discriminate->add_option("--paths", f.paths, "Number of paths/outputs for ev and mixture");
    discriminate->add_option("--trials", f.trials, "Number of trials")->capture_default_str();
    discriminate->add_option("--seed", f.seed, "64-bit seed")->capture_default_str();
    discriminate->add_option("--workers", f.workers, "Worker threads; results do not depend on this")
        ->capture_default_str();
    add_common(discriminate, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cfq::cli::kExitUsage;
    }

    cfq::cli::RunConfig c;
    const std::map<CLI::App*, Command> commands{{report, Command::report},
                                                {scenario, Command::scenario},
                                                {sweep, Command::sweep},
                                                {optimize, Command::optimize},
                                                {discriminate, Command::discriminate}};
    CLI::App* active = app.get_subcommands().front();
    const auto given = [active](const std::string& name) {
        const CLI::Option* o = active->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    c.command = commands.at(active);
    if (!f.input.empty()) c.input_path = f.input;
    if (!f.scenario.empty()) c.scenario_name = f.scenario;
    if (!f.block.empty()) c.block = f.block;
    if (!f.pa.empty()) c.p_a = f.pa;
    if (given("--paths")) c.paths = f.paths;
    if (!f.grid.empty()) c.grid = f.grid;
    if (given("--fp-cap")) c.fp_cap = f.fp_cap;
    c.restrict_ev = f.restrict_ev;
    c.trials = f.trials;
    c.seed = f.seed;
    c.workers = f.workers;
    c.output_format = f.format == "json"  ? cfq::cli::Format::json
                      : f.format == "csv" ? cfq::cli::Format::csv
                                          : cfq::cli::Format::table;
    if (!f.out.empty()) c.output_path = f.out;
    c.self_check = f.self_check;

    if (!f.no_banner) std::cerr << "cfq " << cfq::cli::kVersion << '\n';
    return cfq::cli::run(c, std::cout, std::cerr);
}
