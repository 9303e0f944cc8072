#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cfq/cli.hpp"

using namespace cfq;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

// Runs the installed binary; stderr is discarded.
Result run_binary(const std::string& args) {
    const std::string cmd = std::string(CFQ_BINARY) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("cfq_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

const std::string kSample = CFQ_SAMPLES_DIR "/three_path.json";

}  // namespace

TEST(ParseProbability, FractionsAndDecimals) {
    EXPECT_EQ(std::get<Fraction>(cli::parse_probability("1/3")).str(), "1/3");
    EXPECT_DOUBLE_EQ(std::get<double>(cli::parse_probability("0.25")), 0.25);
    EXPECT_THROW(cli::parse_probability("4/3"), cli::UsageError);
    EXPECT_THROW(cli::parse_probability("-0.1"), cli::UsageError);
    EXPECT_THROW(cli::parse_probability("half"), cli::UsageError);
    EXPECT_THROW(cli::parse_probability("0.5x"), cli::UsageError);
}

TEST(ParseGrid, Forms) {
    const cli::Grid g = cli::parse_grid("0:1:12");
    const auto pts = g.points();
    ASSERT_EQ(pts.size(), 13u);
    EXPECT_NEAR(pts[4], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(pts[6], 0.5, 1e-15);
    EXPECT_EQ(pts.back(), 1.0);
    EXPECT_THROW(cli::parse_grid("0:1:0"), cli::UsageError);
    EXPECT_THROW(cli::parse_grid("0.5:0.2:3"), cli::UsageError);
    EXPECT_THROW(cli::parse_grid("0:2:3"), cli::UsageError);
    EXPECT_THROW(cli::parse_grid("0:1"), cli::UsageError);
    EXPECT_THROW(cli::parse_grid("a:b:c"), cli::UsageError);
}

TEST(SweepRows, KnownRows) {
    const auto rows = cli::sweep_rows(cli::parse_grid("0:1:12"), 9, std::nullopt, 2001);
    EXPECT_EQ(rows.front().achieved, 0.0);
    EXPECT_EQ(rows.front().max_bound, 0.0);
    EXPECT_EQ(rows.front().ev_bound, 0.0);
    EXPECT_NEAR(rows[4].max_bound, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(rows[4].achieved, 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(rows[6].ev_bound, 0.25, 1e-15);
    for (const auto& r : rows) EXPECT_LE(r.achieved, r.max_bound + 1e-9);
}

TEST(Run, ValidationErrorsExitTwo) {
    std::ostringstream out, err;
    cli::RunConfig c;
    c.command = cli::Command::report;
    EXPECT_EQ(cli::run(c, out, err), cli::kExitUsage);  // neither --input nor --scenario
    c.scenario_name = "nope";
    EXPECT_EQ(cli::run(c, out, err), cli::kExitUsage);
    c.command = cli::Command::optimize;
    c.scenario_name.reset();
    EXPECT_EQ(cli::run(c, out, err), cli::kExitUsage);  // missing --pa
    c.p_a = "1";
    EXPECT_EQ(cli::run(c, out, err), cli::kExitUsage);  // endpoint
    c.command = cli::Command::discriminate;
    c.scenario_name = "kd9";
    c.trials = 0;
    EXPECT_EQ(cli::run(c, out, err), cli::kExitUsage);
    c.command = cli::Command::sweep;
    c.scenario_name.reset();
    c.grid = "0.4:0.2:2";
    EXPECT_EQ(cli::run(c, out, err), cli::kExitUsage);
}

TEST(Binary, ReportThreePathJson) {
    const Result r = run_binary("report --scenario three-path --format json --no-banner");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["gain"].get<double>(), 7.0 / 27.0, 1e-11);
    EXPECT_NEAR(j["outcomes"][2]["p_m_given_block"].get<double>(), 16.0 / 27.0, 1e-11);
}

TEST(Binary, ReportMixtureHasNoGain) {
    const Result r = run_binary("report --scenario mixture --paths 2 --format json --no-banner");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["gain"].get<double>(), 0.0);
    for (const auto& o : j["outcomes"]) EXPECT_EQ(o["gain_contribution"].get<double>(), 0.0);
}

TEST(Binary, ReportFromFileWithSelfCheck) {
    const Result r = run_binary("report --input " + kSample + " --block F --self-check --format json --no-banner");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["gain"].get<double>(), 7.0 / 27.0, 1e-11);
    EXPECT_NEAR(j["p_a"].get<double>(), 1.0 / 9.0, 1e-11);
}

TEST(Binary, ScenarioCommandsPass) {
    for (const char* s : {"ev", "kd9", "three-path", "mixture"}) {
        const Result r = run_binary(std::string("scenario --scenario ") + s + " --format json --no-banner");
        EXPECT_EQ(r.code, 0) << s;
        EXPECT_TRUE(nlohmann::json::parse(r.out)["all_ok"].get<bool>()) << s;
    }
}

TEST(Binary, SweepCsv) {
    const Result r = run_binary("sweep --grid 0:1:12 --paths 3 --format csv --no-banner");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "p_a,max_bound,ev_bound,optimizer_achieved,saturated");
    std::getline(in, line);
    EXPECT_EQ(line, "0,0,0,0,true");
    int rows = 1;
    bool third = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("0.333333333333,0.333333333333,", 0) == 0) third = true;
    }
    EXPECT_EQ(rows, 13);
    EXPECT_TRUE(third);
}

TEST(Binary, OptimizeRestricted) {
    const Result r = run_binary("optimize --pa 0.5 --restrict-ev --format json --no-banner");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["achieved"].get<double>(), 0.25, 1e-9);
    EXPECT_TRUE(j["saturated"].get<bool>());
}

TEST(Binary, DiscriminateDeterministic) {
    const std::string args = "discriminate --scenario kd9 --trials 1000000 --seed 7 --format json --no-banner";
    const Result a = run_binary(args);
    const Result b = run_binary(args + " --workers 4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_LE(std::abs(j["empirical"].get<double>() - 1.0 / 6.0), 5.0 * j["sigma"].get<double>());
}

TEST(Binary, SingleTrial) {
    const Result r = run_binary("discriminate --scenario three-path --trials 1 --format json --no-banner");
    ASSERT_EQ(r.code, 0);
    const double e = nlohmann::json::parse(r.out)["empirical"].get<double>();
    EXPECT_TRUE(e == 0.0 || e == 1.0);
}

TEST(Binary, EveryCommandIsByteStable) {
    for (const char* args : {"report --scenario kd9 --format csv", "scenario --scenario ev --pa 1/4 --paths 5",
                             "optimize --pa 1/3 --paths 4", "discriminate --scenario mixture --trials 5000 --seed 3"}) {
        const Result a = run_binary(std::string(args) + " --no-banner");
        const Result b = run_binary(std::string(args) + " --no-banner");
        EXPECT_EQ(a.code, 0) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Binary, OutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "cfq_test_out.json";
    std::filesystem::remove(path);
    const Result r = run_binary("report --scenario kd9 --format json --no-banner --out " + path.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    EXPECT_NEAR(nlohmann::json::parse(in)["gain"].get<double>(), 1.0 / 3.0, 1e-11);
}

TEST(Binary, UsageErrorsExitTwo) {
    EXPECT_EQ(run_binary("").code, 2);
    EXPECT_EQ(run_binary("frobnicate").code, 2);
    EXPECT_EQ(run_binary("report --scenario kd9 --format xml").code, 2);
    EXPECT_EQ(run_binary("report --input " + kSample + " --block Q").code, 2);
    EXPECT_EQ(run_binary("report --input " + kSample).code, 2);
    EXPECT_EQ(run_binary("sweep --grid 0:1:0").code, 2);
    EXPECT_EQ(run_binary("discriminate --scenario kd9 --trials 0").code, 2);
    EXPECT_EQ(run_binary("report --input /nonexistent.json --block F").code, 2);
    const std::string broken = temp_file("broken.json", "{\n  \"dim\": 2,\n  \"elements\": [\n");
    EXPECT_EQ(run_binary("report --input " + broken + " --block F").code, 2);
    const std::string zero = temp_file("zero.json", R"({"dim": 2, "elements": [],
      "tagged_paths": [{"name": "F", "stage": 0, "mode": 0}], "input": [[0, 0], [0, 0]]})");
    EXPECT_EQ(run_binary("report --input " + zero + " --block F").code, 2);
}

TEST(Binary, NonUnitaryNetworkExitsThree) {
    const std::string nan = temp_file("nan.yaml", R"({"dim": 2, "elements": [{"i": 0, "j": 1, "theta": .nan, "phi": 0}],
      "tagged_paths": [{"name": "F", "stage": 0, "mode": 0}], "input": [[1, 0], [0, 0]]})");
    EXPECT_EQ(run_binary("report --input " + nan + " --block F").code, 3);
}

TEST(Golden, ReportJsonMatchesByteForByte) {
    for (const char* s : {"ev", "kd9", "three-path", "mixture"}) {
        std::ifstream in(std::string(CFQ_GOLDEN_DIR) + "/report_" + s + ".json");
        ASSERT_TRUE(in) << s;
        std::stringstream golden;
        golden << in.rdbuf();
        const Result r = run_binary(std::string("report --scenario ") + s + " --format json --no-banner");
        ASSERT_EQ(r.code, 0) << s;
        EXPECT_EQ(r.out, golden.str()) << s;
    }
}

TEST(Golden, ThreePathFileHoldsExactValues) {
    std::ifstream in(std::string(CFQ_GOLDEN_DIR) + "/report_three-path.json");
    const auto j = nlohmann::json::parse(in);
    const double given[] = {4.0 / 27.0, 4.0 / 27.0, 16.0 / 27.0};
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(j["outcomes"][k]["p_m_given_block"].get<double>(), given[k], 1e-12);
    EXPECT_NEAR(j["gain"].get<double>(), 7.0 / 27.0, 1e-12);
    EXPECT_NEAR(j["p_error"].get<double>(), 17.0 / 54.0, 1e-12);
}
