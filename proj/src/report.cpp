#include "demobench/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "demobench/detail/hash.hpp"
#include "demobench/detail/time.hpp"
#include "demobench/errors.hpp"
#include "demobench/ingest.hpp"
#include "demobench/version.hpp"

namespace demobench {

using ordered_json = nlohmann::ordered_json;

RenderMode parse_render_mode(const std::string& text) {
    if (text == "structured") return RenderMode::structured;
    if (text == "human") return RenderMode::human;
    fail(errc::invalid_config, "unknown render mode '" + text + "'");
}

std::string format_fixed(double value, int decimals) {
    // llrint under the default FE_TONEAREST mode rounds half to even
    double scale = std::pow(10.0, decimals);
    long long scaled = std::llrint(value * scale);
    bool negative = scaled < 0;
    unsigned long long mag = negative ? -static_cast<unsigned long long>(scaled) : scaled;
    std::string digits = std::to_string(mag);
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
        digits.insert(0, decimals + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - decimals, ".");
    return (negative ? "-" : "") + digits;
}

CohortIdentity describe_cohort(const ObservedCohort& cohort) {
    CohortIdentity id;
    id.label = cohort.label();
    id.phase = cohort.phase();
    id.window = cohort.window();
    id.total = cohort.total();
    id.positives = cohort.total_positive();
    id.rejected_records = cohort.rejected_records();
    id.source_digest = cohort.source_digest();
    return id;
}

std::string benchmark_digest(const DemographicBenchmark& benchmark) {
    return "fnv1a:" + detail::fnv1a_hex(save_benchmark_content(benchmark));
}

std::string echo_config(const AuditConfig& c) {
    std::ostringstream out;
    out << "tdd_pass=" << c.severity.pass << ";tdd_warn=" << c.severity.warn
        << ";alignment_policy=" << alignment_policy_name(c.policy)
        << ";reference_strategy=" << reference_strategy_name(c.reference_strategy);
    if (c.reference_group) out << ";reference_group=" << *c.reference_group;
    out << ";ll144=" << (c.ll144_enabled ? "on" : "off")
        << ";ll144_threshold=" << c.ll144_threshold
        << ";nddp_normalization=" << nddp_normalization_name(c.nddp)
        << ";drift_threshold_benchmark=" << c.drift.benchmark_tdd
        << ";drift_threshold_step=" << c.drift.step_tdd;
    for (const char* metric : {"eod", "od", "spd", "di"}) {
        const FairRange& r = c.fair_ranges.by_id(metric);
        out << ";fair_range." << metric << "=[" << r.lower << "," << r.upper
            << ",ideal=" << r.ideal << "]";
    }
    return out.str();
}

FairnessBlock render_fairness_block(const AttributeSchema& schema,
                                    const GroupKey& reference,
                                    ReferenceStrategy strategy,
                                    const std::vector<FairnessAssessment>& assessments) {
    FairnessBlock block;
    block.reference = schema.group_label(reference);
    block.strategy = reference_strategy_name(strategy);
    for (const auto& a : assessments) {
        FairnessRow row;
        row.metric = a.metric;
        row.value = a.value;
        row.lower = a.range.lower;
        row.upper = a.range.upper;
        row.ideal = a.range.ideal;
        row.verdict = verdict_name(a.verdict);
        row.underprivileged = schema.group_label(a.underprivileged);
        row.privileged = schema.group_label(a.privileged);
        row.note = a.note;
        block.rows.push_back(std::move(row));
    }
    return block;
}

namespace {

ordered_json number_or_null(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json window_json(const std::optional<TimeWindow>& window) {
    if (!window) return nullptr;
    return ordered_json{{"start", detail::format_iso8601(window->start)},
                        {"end", detail::format_iso8601(window->end)}};
}

ordered_json disparity_json(const DisparityReport& report) {
    ordered_json j;
    j["benchmark"] = {{"name", report.benchmark_name}, {"version", report.benchmark_version}};
    j["cohort"] = report.cohort_label;
    j["policy"] = alignment_policy_name(report.policy);
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"group", row.group},
                        {"expected", row.expected},
                        {"actual", row.actual},
                        {"positive_share", number_or_null(row.positive_share)},
                        {"dd", row.dd},
                        {"ddp", number_or_null(row.ddp)}});
    }
    j["rows"] = std::move(rows);
    j["aggregates"] = {{"tdd", report.tdd},
                       {"ndd", report.ndd},
                       {"tddp", number_or_null(report.tddp)},
                       {"nddp", number_or_null(report.nddp)}};
    ordered_json skipped = ordered_json::array();
    for (const auto& s : report.skipped) {
        skipped.push_back({{"group", s.group}, {"reason", s.reason}});
    }
    j["skipped"] = std::move(skipped);
    ordered_json diags = ordered_json::array();
    for (const auto& d : report.diagnostics) {
        diags.push_back({{"kind", d.kind}, {"group", d.group}});
    }
    j["diagnostics"] = std::move(diags);
    return j;
}

ordered_json finding_json(const BiasFinding& finding) {
    ordered_json j;
    j["stage"] = bias_stage_name(finding.stage);
    j["phase"] = phase_name(finding.phase);
    j["severity"] = severity_name(finding.severity);
    const bool structural = finding.stage == BiasStage::structural;
    j["metrics"] = {{structural ? "tddp" : "tdd", finding.primary_tdd},
                    {structural ? "nddp" : "ndd", finding.primary_ndd}};
    ordered_json worst = ordered_json::array();
    for (const auto& w : finding.worst_offenders) {
        worst.push_back({{"group", w.group}, {structural ? "ddp" : "dd", w.value}});
    }
    j["worst_offenders"] = std::move(worst);
    if (finding.training_drift_tdd) {
        j["supplementary"] = {{"production_vs_training_tdd", *finding.training_drift_tdd},
                              {"caveat", "training data is not ground truth"}};
    }
    j["narrative"] = finding.narrative;
    return j;
}

ordered_json drift_json(const DriftSeries& series) {
    ordered_json j;
    j["benchmark"] = {{"name", series.benchmark_name}, {"version", series.benchmark_version}};
    j["thresholds"] = {{"benchmark_tdd", series.thresholds.benchmark_tdd},
                       {"step_tdd", series.thresholds.step_tdd}};
    ordered_json points = ordered_json::array();
    for (const auto& p : series.points) {
        points.push_back({{"label", p.label},
                          {"window", window_json(p.window)},
                          {"total", p.total},
                          {"tdd_vs_benchmark", p.tdd_vs_benchmark},
                          {"step_tdd", number_or_null(p.step_tdd)}});
    }
    j["windows"] = std::move(points);
    ordered_json crossings = ordered_json::array();
    for (const auto& c : series.crossings) {
        crossings.push_back({{"window_index", c.window_index},
                             {"kind", c.kind},
                             {"value", c.value},
                             {"threshold", c.threshold}});
    }
    j["crossings"] = std::move(crossings);
    return j;
}

ordered_json report_json(const AuditReport& report) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = {{"name", "demobench"}, {"version", report.tool_version}};
    j["timestamp"] = report.timestamp;
    j["digest"] = "";
    j["benchmark"] = {{"name", report.benchmark_name},
                      {"version", report.benchmark_version},
                      {"digest", report.benchmark_digest}};
    ordered_json cohorts = ordered_json::array();
    for (const auto& c : report.cohorts) {
        cohorts.push_back({{"label", c.label},
                           {"phase", phase_name(c.phase)},
                           {"window", window_json(c.window)},
                           {"total", c.total},
                           {"positives", c.positives},
                           {"rejected_records", c.rejected_records},
                           {"source_digest", c.source_digest}});
    }
    j["cohorts"] = std::move(cohorts);
    j["config"] = report.config_echo;
    if (report.exclusions) {
        j["exclusions"] = {{"threshold", report.exclusions->threshold},
                           {"excluded", report.exclusions->excluded},
                           {"retained", report.exclusions->retained}};
    } else {
        j["exclusions"] = nullptr;
    }
    ordered_json disparity = ordered_json::array();
    for (const auto& d : report.disparity) disparity.push_back(disparity_json(d));
    j["disparity"] = std::move(disparity);
    if (report.fairness) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : report.fairness->rows) {
            rows.push_back({{"metric", r.metric},
                            {"value", number_or_null(r.value)},
                            {"fair_range", {{"lower", r.lower}, {"upper", r.upper}, {"ideal", r.ideal}}},
                            {"verdict", r.verdict},
                            {"underprivileged", r.underprivileged},
                            {"privileged", r.privileged},
                            {"note", r.note}});
        }
        j["fairness"] = {{"reference", report.fairness->reference},
                         {"strategy", report.fairness->strategy},
                         {"rows", std::move(rows)}};
    } else {
        j["fairness"] = nullptr;
    }
    ordered_json findings = ordered_json::array();
    for (const auto& f : report.findings) findings.push_back(finding_json(f));
    j["findings"] = std::move(findings);
    j["drift"] = report.drift ? drift_json(*report.drift) : ordered_json(nullptr);
    return j;
}

// Digest covers the structured form with timestamp and digest blanked, so it
// is stable across runs on identical inputs.
std::string compute_digest(ordered_json j) {
    j["timestamp"] = "";
    j["digest"] = "";
    return "fnv1a:" + detail::fnv1a_hex(j.dump());
}

void render_rows_human(std::ostream& out, const DisparityReport& report) {
    std::size_t width = 5;
    for (const auto& row : report.rows) width = std::max(width, row.group.size());
    const bool shares = !report.rows.empty() && report.rows.front().positive_share.has_value();

    out << "comparison: benchmark '" << report.benchmark_name << "' ("
        << report.benchmark_version << ") vs cohort '" << report.cohort_label
        << "', policy " << alignment_policy_name(report.policy) << "\n";
    out << std::string(width, ' ') << "        P        R";
    if (shares) out << "        S";
    out << "       DD";
    if (shares) out << "      DDP";
    out << "\n";
    for (const auto& row : report.rows) {
        out << row.group << std::string(width - row.group.size(), ' ');
        out << "  " << format_fixed(row.expected, 4) << "   " << format_fixed(row.actual, 4);
        if (shares) out << "   " << format_fixed(*row.positive_share, 4);
        std::string dd = format_fixed(row.dd, 4);
        out << "  " << std::string(7 - dd.size(), ' ') << dd;
        if (shares) {
            std::string ddp = format_fixed(*row.ddp, 4);
            out << "  " << std::string(7 - ddp.size(), ' ') << ddp;
        }
        out << "\n";
    }
    out << "aggregates: TDD=" << format_fixed(report.tdd, 4)
        << " NDD=" << format_fixed(report.ndd, 4);
    if (report.tddp) out << " TDDP=" << format_fixed(*report.tddp, 4);
    if (report.nddp) out << " NDDP=" << format_fixed(*report.nddp, 4);
    out << "\n";
    if (!report.skipped.empty()) {
        out << "skipped:\n";
        for (const auto& s : report.skipped) {
            out << "  " << s.group << ": " << s.reason << "\n";
        }
    }
    if (!report.diagnostics.empty()) {
        out << "diagnostics:\n";
        for (const auto& d : report.diagnostics) {
            out << "  [" << d.kind << "] " << d.group << "\n";
        }
    }
}

std::string render_human(const AuditReport& report) {
    std::ostringstream out;
    out << "demobench audit report (schema " << kReportSchemaVersion << ", tool "
        << report.tool_version << ")\n";
    out << "generated: " << report.timestamp << "\n";
    out << "benchmark: " << report.benchmark_name << " " << report.benchmark_version << " ("
        << report.benchmark_digest << ")\n";
    for (const auto& c : report.cohorts) {
        out << "cohort: " << c.label << " [" << phase_name(c.phase) << "] total=" << c.total
            << " positives=" << c.positives;
        if (c.rejected_records > 0) out << " rejected_records=" << c.rejected_records;
        if (c.window) {
            out << " window=" << detail::format_iso8601(c.window->start) << "/"
                << detail::format_iso8601(c.window->end);
        }
        out << "\n";
    }
    out << "config: " << report.config_echo << "\n";
    if (report.exclusions) {
        out << "small-group exclusions (threshold " << format_fixed(report.exclusions->threshold, 4)
            << ", fairness sweeps only):\n";
        if (report.exclusions->excluded.empty()) {
            out << "  (none)\n";
        }
        for (const auto& g : report.exclusions->excluded) out << "  excluded: " << g << "\n";
        out << "  retained groups: " << report.exclusions->retained << "\n";
    }
    out << "\n";
    for (const auto& d : report.disparity) {
        render_rows_human(out, d);
        out << "\n";
    }
    if (!report.findings.empty()) {
        out << "findings:\n";
        for (const auto& f : report.findings) {
            out << "  [" << severity_name(f.severity) << "] " << f.narrative << "\n";
        }
        out << "\n";
    }
    if (report.fairness) {
        out << "fairness sweep (reference=" << report.fairness->reference << ", strategy="
            << report.fairness->strategy << "):\n";
        for (const auto& r : report.fairness->rows) {
            out << "  [" << r.verdict << "] " << r.metric << " " << r.underprivileged << " vs "
                << r.privileged;
            if (r.value) {
                out << " = " << format_fixed(*r.value, 4);
            } else {
                out << " (" << r.note << ")";
            }
            out << "\n";
        }
    }
    out << "report digest: " << compute_digest(report_json(report)) << "\n";
    return out.str();
}

}  // namespace

std::string render_report(const AuditReport& report, RenderMode mode) {
    if (mode == RenderMode::human) {
        return render_human(report);
    }
    ordered_json j = report_json(report);
    j["digest"] = compute_digest(j);
    return j.dump(2) + "\n";
}

std::string render_drift_report(const DriftSeries& series, RenderMode mode) {
    if (mode == RenderMode::structured) {
        ordered_json j;
        j["schema_version"] = kReportSchemaVersion;
        j["tool"] = {{"name", "demobench"}, {"version", kToolVersion}};
        j["drift"] = drift_json(series);
        j["digest"] = "fnv1a:" + detail::fnv1a_hex(j.dump());
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "drift series vs benchmark '" << series.benchmark_name << "' ("
        << series.benchmark_version << ")\n";
    out << "thresholds: benchmark=" << format_fixed(series.thresholds.benchmark_tdd, 4)
        << " step=" << format_fixed(series.thresholds.step_tdd, 4) << "\n";
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const DriftPoint& p = series.points[i];
        out << "  window " << i << " '" << p.label << "' ["
            << detail::format_iso8601(p.window.start) << " .. "
            << detail::format_iso8601(p.window.end) << ") total=" << p.total
            << " tdd=" << format_fixed(p.tdd_vs_benchmark, 4);
        if (p.step_tdd) out << " step=" << format_fixed(*p.step_tdd, 4);
        out << "\n";
    }
    if (series.crossings.empty()) {
        out << "no threshold crossings\n";
    } else {
        for (const auto& c : series.crossings) {
            out << "  CROSSING window " << c.window_index << " " << c.kind << " "
                << format_fixed(c.value, 4) << " > " << format_fixed(c.threshold, 4) << "\n";
        }
    }
    return out.str();
}

bool any_adverse_finding(const AuditReport& report) {
    for (const auto& f : report.findings) {
        if (f.severity != Severity::pass) return true;
    }
    return false;
}

}  // namespace demobench
