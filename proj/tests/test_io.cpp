#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "cfq/io/format.hpp"
#include "cfq/io/interferometer_file.hpp"
#include "cfq/io/report_io.hpp"
#include "cfq/scenarios.hpp"

using namespace cfq;
using namespace cfq::io;

namespace {

const char* kMinimal = R"({
  "dim": 2,
  "elements": [{"i": 0, "j": 1, "theta": 0.7853981633974483, "phi": 0}],
  "tagged_paths": [{"name": "A", "stage": 0, "mode": 0}],
  "input": [[1, 0], [0, 0]]
})";

int error_line(const std::string& text) {
    try {
        parse_interferometer(text, "doc");
    } catch (const InputError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Format, Digits) {
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(1.0 / 3.0, kTableDigits), "0.3333");
    EXPECT_EQ(format_number(-1e-17), "0");
    EXPECT_EQ(format_number(0.25), "0.25");
}

TEST(ReportJson, RoundTripIsByteIdentical) {
    for (const auto& name : scenario_names()) {
        const Scenario s = make_scenario(name);
        const std::string first = to_json(s.report(), s.name, s.a_label).dump(2);
        const GainSummary back = summary_from_json(Json::parse(first));
        const std::string second = to_json(back, s.name, s.a_label).dump(2);
        EXPECT_EQ(first, second) << name;
        EXPECT_TRUE(check_identities(back, 1e-10).empty()) << name;
    }
}

TEST(ReportJson, FieldOrder) {
    const Json j = to_json(kd_scenario().report(), "kd9", "a");
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    const std::vector<std::string> want{"source", "blocked", "p_a", "delta_a", "gain", "p_error", "probability_warning",
                                        "outcomes", "probes"};
    EXPECT_EQ(keys, want);
}

TEST(ReportCsv, RowsAndHeader) {
    std::ostringstream os;
    write_report_csv(os, three_path_scenario().report());
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kReportCsvHeader);
    int outcomes = 0, probes = 0, absorbed = 0;
    while (std::getline(in, line)) {
        outcomes += line.rfind("outcome,", 0) == 0;
        probes += line.rfind("probe,", 0) == 0;
        absorbed += line.rfind("absorbed,", 0) == 0;
    }
    EXPECT_EQ(outcomes, 3);
    EXPECT_EQ(probes, 1);
    EXPECT_EQ(absorbed, 1);
}

TEST(InterferometerFile, ParsesMinimal) {
    const InterferometerDocument doc = parse_interferometer(kMinimal);
    EXPECT_EQ(doc.spec.dim, 2u);
    EXPECT_EQ(doc.spec.elements.size(), 1u);
    EXPECT_EQ(doc.spec.output_label(1), "2");
    EXPECT_EQ(doc.input.size(), 2u);
}

TEST(InterferometerFile, SampleMatchesBuiltInNetwork) {
    const InterferometerDocument doc = load_interferometer(CFQ_SAMPLES_DIR "/three_path.json");
    const InterferometerSpec ref = three_path_spec();
    EXPECT_LE((compose(doc.spec) - compose(ref)).cwiseAbs().maxCoeff(), 1e-15);
    ASSERT_EQ(doc.spec.tagged_paths.size(), ref.tagged_paths.size());
    for (std::size_t k = 0; k < ref.tagged_paths.size(); ++k) {
        EXPECT_EQ(doc.spec.tagged_paths[k].name, ref.tagged_paths[k].name);
        EXPECT_EQ(doc.spec.tagged_paths[k].stage, ref.tagged_paths[k].stage);
        EXPECT_EQ(doc.spec.tagged_paths[k].mode, ref.tagged_paths[k].mode);
    }
}

TEST(InterferometerFile, ErrorsNameTheLine) {
    // Syntax error on line 3.
    EXPECT_EQ(error_line("{\n  \"dim\": 2,\n  \"elements\": [}\n"), 3);
    // Unknown field on line 4.
    EXPECT_EQ(error_line(R"({
  "dim": 2,
  "elements": [],
  "colour": "red",
  "tagged_paths": [],
  "input": [[1, 0], [0, 0]]
})"),
              4);
    // Non-numeric theta on line 3.
    EXPECT_EQ(error_line(R"({
  "dim": 2,
  "elements": [{"i": 0, "j": 1, "theta": "wide", "phi": 0}],
  "tagged_paths": [],
  "input": [[1, 0], [0, 0]]
})"),
              3);
    // Mode out of range on line 4.
    EXPECT_EQ(error_line(R"({
  "dim": 2,
  "elements": [],
  "tagged_paths": [{"name": "A", "stage": 0, "mode": 5}],
  "input": [[1, 0], [0, 0]]
})"),
              4);
    // Wrong number of amplitudes on line 5.
    EXPECT_EQ(error_line(R"({
  "dim": 2,
  "elements": [],
  "tagged_paths": [],
  "input": [[1, 0]]
})"),
              5);
}

TEST(InterferometerFile, RejectsBadContent) {
    EXPECT_THROW(parse_interferometer(R"({"dim": 2, "elements": [], "tagged_paths": [], "input": [[0,0],[0,0]]})"),
                 InputError);
    EXPECT_THROW(parse_interferometer(R"({"dim": 2, "elements": [{"i": 1, "j": 1, "theta": 0, "phi": 0}],
                                          "tagged_paths": [], "input": [[1,0],[0,0]]})"),
                 InputError);
    EXPECT_THROW(parse_interferometer(R"({"dim": 2, "elements": [], "tagged_paths": [
                                          {"name": "A", "stage": 0, "mode": 0}, {"name": "A", "stage": 0, "mode": 1}],
                                          "input": [[1,0],[0,0]]})"),
                 InputError);
    EXPECT_THROW(parse_interferometer(R"({"dim": 2, "elements": [], "tagged_paths": [
                                          {"name": "A", "stage": 3, "mode": 0}], "input": [[1,0],[0,0]]})"),
                 InputError);
    EXPECT_THROW(parse_interferometer(R"({"dim": 2, "tagged_paths": [], "input": [[1,0],[0,0]]})"), InputError);
    EXPECT_THROW(parse_interferometer(R"({"dim": 2, "elements": [], "tagged_paths": [], "input": [[1,0],[0,0]],
                                          "output_labels": ["x", "x"]})"),
                 InputError);
    EXPECT_THROW(load_interferometer("/nonexistent/file.json"), InputError);
}
