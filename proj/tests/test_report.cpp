#include <doctest.h>

#include <json.hpp>

#include "demobench/audit.hpp"
#include "demobench/config.hpp"
#include "demobench/errors.hpp"
#include "demobench/report.hpp"
#include "demobench/version.hpp"
#include "test_support.hpp"

using namespace demobench;
using namespace testsupport;
using ordered_json = nlohmann::ordered_json;

namespace {

AuditReport fixture_report(const std::string& timestamp) {
    auto benchmark = usa_benchmark();
    benchmark.version = "v0001";
    auto cohort = fixture_cohort("adp_2023.csv", Phase::production);
    AuditConfig config;

    AuditReport report;
    report.tool_version = kToolVersion;
    report.timestamp = timestamp;
    report.benchmark_name = benchmark.name;
    report.benchmark_version = benchmark.version;
    report.benchmark_digest = benchmark_digest(benchmark);
    report.cohorts.push_back(describe_cohort(cohort));
    report.config_echo = echo_config(config);
    report.disparity.push_back(
        build_disparity_report(benchmark, cohort, config.policy, config.nddp));
    report.findings.push_back(deployment_bias_audit(cohort, benchmark, std::nullopt, config));
    report.findings.push_back(structural_bias_audit(cohort, benchmark, config));
    auto reference = select_reference_group(cohort, config.reference_strategy);
    report.fairness = render_fairness_block(
        cohort.schema(), reference, config.reference_strategy,
        pairwise_fairness_sweep(cohort, reference, config.fair_ranges));
    return report;
}

}  // namespace

TEST_CASE("fixed-point formatting") {
    CHECK(format_fixed(0.0, 4) == "0.0000");
    CHECK(format_fixed(1.0, 4) == "1.0000");
    CHECK(format_fixed(-0.08868416158384161, 4) == "-0.0887");
    CHECK(format_fixed(0.36131988801119885, 4) == "0.3613");
    CHECK(format_fixed(1.0 / 3.0, 4) == "0.3333");
    CHECK(format_fixed(2.0 / 3.0, 4) == "0.6667");
    CHECK(format_fixed(-1.5, 4) == "-1.5000");
    CHECK(format_fixed(12.34567, 2) == "12.35");
    // exactly representable ties round half to even
    CHECK(format_fixed(0.15625, 4) == "0.1562");   // 0.15625 = 5/32, digit before is even
    CHECK(format_fixed(0.09375, 4) == "0.0938");   // 0.09375 = 3/32, digit before is odd
}

TEST_CASE("structured reports round-trip numerically and pin the schema version") {
    AuditReport report = fixture_report("2026-01-02T03:04:05Z");
    std::string rendered = render_report(report, RenderMode::structured);
    ordered_json j = ordered_json::parse(rendered);

    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["tool"]["name"] == "demobench");
    CHECK(j["timestamp"] == "2026-01-02T03:04:05Z");
    CHECK(j["digest"].get<std::string>().rfind("fnv1a:", 0) == 0);

    // numeric fields reproduce the in-memory values exactly
    const auto& rows = j["disparity"][0]["rows"];
    REQUIRE(rows.size() == 16);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const DisparityRow& row = report.disparity[0].rows[i];
        CHECK(rows[i]["expected"].get<double>() == row.expected);
        CHECK(rows[i]["actual"].get<double>() == row.actual);
        CHECK(rows[i]["dd"].get<double>() == row.dd);
    }
    CHECK(j["disparity"][0]["aggregates"]["tdd"].get<double>() == report.disparity[0].tdd);
}

TEST_CASE("report digest ignores the timestamp") {
    AuditReport a = fixture_report("2026-01-02T03:04:05Z");
    AuditReport b = fixture_report("2027-12-31T23:59:59Z");
    ordered_json ja = ordered_json::parse(render_report(a, RenderMode::structured));
    ordered_json jb = ordered_json::parse(render_report(b, RenderMode::structured));
    CHECK(ja["digest"] == jb["digest"]);
    // and the rendered bytes are identical once the timestamp is erased
    ja["timestamp"] = "";
    jb["timestamp"] = "";
    CHECK(ja.dump() == jb.dump());
}

TEST_CASE("human mode prints one row per group plus an aggregates block") {
    AuditReport report = fixture_report("2026-01-02T03:04:05Z");
    std::string text = render_report(report, RenderMode::human);
    std::size_t data_rows = 0;
    std::istringstream in(text);
    std::string line;
    bool aggregates_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("aggregates:", 0) == 0) aggregates_seen = true;
        if (line.find('|') != std::string::npos && line.find("  0.") != std::string::npos) {
            ++data_rows;
        }
    }
    CHECK(data_rows >= 16);
    CHECK(aggregates_seen);
    CHECK(text.find("TDD=0.3613") != std::string::npos);
    CHECK(text.find("findings:") != std::string::npos);
}

TEST_CASE("skipped groups show up in the report") {
    auto schema = abc_schema();
    // benchmark covers A and B only; the cohort also sees C
    auto benchmark = make_benchmark(schema, {{"A", 1.0}, {"B", 1.0}});
    auto cohort = make_cohort(schema, {{"A", 10, 2}, {"B", 10, 2}, {"C", 10, 2}});
    auto disparity = build_disparity_report(benchmark, cohort, AlignmentPolicy::union_zero_fill);
    REQUIRE(!disparity.skipped.empty());
    CHECK(disparity.skipped[0].group == "C");

    AuditReport report;
    report.tool_version = kToolVersion;
    report.timestamp = "2026-01-01T00:00:00Z";
    report.benchmark_name = benchmark.name;
    report.benchmark_digest = benchmark_digest(benchmark);
    report.cohorts.push_back(describe_cohort(cohort));
    report.config_echo = echo_config({});
    report.disparity.push_back(disparity);
    std::string text = render_report(report, RenderMode::human);
    CHECK(text.find("skipped:") != std::string::npos);
    ordered_json j = ordered_json::parse(render_report(report, RenderMode::structured));
    CHECK(!j["disparity"][0]["skipped"].empty());
}

TEST_CASE("config echo carries the effective settings") {
    AuditConfig config;
    apply_config_setting(config, "tdd_pass", "0.01");
    apply_config_setting(config, "fair_range.di.upper", "1.25");
    std::string echo = echo_config(config);
    CHECK(echo.find("tdd_pass=0.01") != std::string::npos);
    CHECK(echo.find("fair_range.di=[0.8,1.25,ideal=1]") != std::string::npos);
    CHECK(echo.find("alignment_policy=union-zero-fill") != std::string::npos);
}

TEST_CASE("config files parse with precedence and validation") {
    std::string content =
        "# audit settings\n"
        "tdd_pass = 0.02\n"
        "alignment_policy = intersect\n"
        "fair_range.di.upper = 1.25\n";
    AuditConfig config = parse_config_file(content);
    CHECK(config.severity.pass == 0.02);
    CHECK(config.policy == AlignmentPolicy::intersect);
    CHECK(config.fair_ranges.di.upper == 1.25);

    CHECK_THROWS_AS(parse_config_file("nonsense = 1\n"), AuditError);
    CHECK_THROWS_AS(parse_config_file("tdd_pass = banana\n"), AuditError);
    CHECK_THROWS_AS(parse_config_file("tdd_warn = 0.01\ntdd_pass = 0.5\n"), AuditError);
}

TEST_CASE("drift reports render in both modes") {
    auto schema = ab_schema();
    auto benchmark = make_benchmark(schema, {{"A", 1.0}, {"B", 1.0}});
    std::map<GroupKey, GroupCounts> groups{{schema.key({"A"}), {80, 0, std::nullopt}},
                                           {schema.key({"B"}), {20, 0, std::nullopt}}};
    ObservedCohort window("w0", Phase::production, schema, groups, TimeWindow{0, 86400});
    auto series = drift_monitor({window}, benchmark, DriftThresholds{0.1, 0.1});
    REQUIRE(series.crossings.size() == 1);

    std::string human = render_drift_report(series, RenderMode::human);
    CHECK(human.find("CROSSING") != std::string::npos);
    ordered_json j = ordered_json::parse(render_drift_report(series, RenderMode::structured));
    CHECK(j["drift"]["crossings"].size() == 1);
    CHECK(j["drift"]["windows"][0]["tdd_vs_benchmark"].get<double>() ==
          series.points[0].tdd_vs_benchmark);
}
