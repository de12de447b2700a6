#include "linkscan/report_json.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "linkscan/simulate.hpp"
#include "test_support.hpp"

using namespace linkscan;

namespace {

pipeline::LinkageReport sample_report() {
    auto config = simulate::default_fixture_config(11);
    auto b = simulate::synthetic_returns(config);
    b.countries.push_back({"Flat", b.dates, std::vector<double>(b.dates.size(), 0.0), ReturnMode::log});
    auto report = pipeline::run_pipeline(b, {});
    report.provenance.input_name = "prices.csv";
    report.provenance.input_sha256 = std::string(64, 'a');
    report.provenance.generated_at = "2026-01-01T00:00:00Z";
    return report;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

TEST(ReportJson, TopLevelKeysInOrder) {
    const auto j = Json::parse(serialize_report(sample_report()));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    const std::vector<std::string> expected{"version",  "config",    "provenance", "descriptives",
                                            "filter",   "countries", "curves"};
    EXPECT_EQ(keys, expected);
    EXPECT_EQ(j["version"], kReportSchemaVersion);
    EXPECT_TRUE(j["countries"].is_array());
    EXPECT_TRUE(j["curves"].is_array());
}

TEST(ReportJson, RoundTripIsLossless) {
    const auto report = sample_report();
    const auto text = serialize_report(report);
    const auto back = parse_report(text);
    EXPECT_EQ(back, report);
    EXPECT_EQ(serialize_report(back), text);
    EXPECT_EQ(text.back(), '\n');
}

TEST(ReportJson, SkippedCountryCarriesError) {
    const auto j = Json::parse(serialize_report(sample_report()));
    const auto& flat = j["countries"].back();
    EXPECT_EQ(flat["country"], "Flat");
    EXPECT_EQ(flat["status"], "skipped");
    EXPECT_EQ(flat["error"]["kind"], "numerical");
    EXPECT_EQ(j["countries"][0]["status"], "estimated");
}

TEST(ReportJson, NonFiniteValuesSurvive) {
    TestResult t{"f", std::numeric_limits<double>::infinity(), Distribution::fisher_f, 2, 10, 0.0, 3, true};
    Json j = t;
    EXPECT_EQ(j["stat"], "inf");
    const auto back = j.get<TestResult>();
    EXPECT_EQ(back, t);

    kernel::LocalFitPoint p{0.5, std::numeric_limits<double>::quiet_NaN(), -1.0, 2.0, 3.0};
    const auto q = Json(p).get<kernel::LocalFitPoint>();
    EXPECT_TRUE(std::isnan(q.beta0));
    EXPECT_EQ(q.beta1, -1.0);
}

TEST(ReportJson, OverflowedFStatisticRoundTrips) {
    ols::FitMetrics m{1.0, 1.0, 500.0,
                      {"f", std::numeric_limits<double>::max(), Distribution::fisher_f, 2, 10, 0.0, 3, true}, -5.0};
    EXPECT_EQ(Json(m).get<ols::FitMetrics>(), m);
}

TEST(ReportJson, RejectsUnknownVersion) {
    auto j = Json::parse(serialize_report(sample_report()));
    j["version"] = 99;
    EXPECT_ANY_THROW((void)parse_report(j.dump()));
}

TEST(PlotCsv, ColumnsAndValues) {
    const auto report = sample_report();
    std::ostringstream out;
    write_plot_csv(out, report);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kPlotCsvHeader);
    EXPECT_EQ(split(line).size(), 8u);

    std::size_t expected_rows = 0;
    for (const auto& c : report.curves)
        if (c.curve) expected_rows += c.curve->points.size();

    const auto& first = *report.curves.front().curve;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        ASSERT_EQ(cells.size(), 8u) << line;
        if (rows == 0) {
            EXPECT_EQ(cells[0], report.curves.front().country);
            const auto& p = first.points.front();
            EXPECT_EQ(std::stod(cells[1]), p.x);
            EXPECT_EQ(std::stod(cells[2]), p.beta0);
            EXPECT_EQ(std::stod(cells[3]), -p.beta1);
            EXPECT_EQ(std::stod(cells[4]), p.beta2);
            EXPECT_EQ(std::stod(cells[5]), p.weight_mass);
            EXPECT_EQ(cells[6], first.edge_flags.front() ? "1" : "0");
            EXPECT_EQ(std::stod(cells[7]), first.linear_overlay.at(p.x));
        }
        ++rows;
    }
    EXPECT_EQ(rows, expected_rows);
}
