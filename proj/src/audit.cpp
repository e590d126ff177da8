#include "demobench/audit.hpp"

#include <algorithm>
#include <cmath>

#include "demobench/errors.hpp"
#include "demobench/report.hpp"

namespace demobench {

const char* bias_stage_name(BiasStage stage) {
    switch (stage) {
        case BiasStage::sampling: return "sampling";
        case BiasStage::deployment: return "deployment";
        case BiasStage::structural: return "structural";
    }
    return "?";
}

const char* severity_name(Severity severity) {
    switch (severity) {
        case Severity::pass: return "Pass";
        case Severity::warn: return "Warn";
        case Severity::fail: return "Fail";
    }
    return "?";
}

Severity severity_for(double aggregate, const SeverityThresholds& thresholds) {
    if (aggregate <= thresholds.pass) return Severity::pass;
    if (aggregate <= thresholds.warn) return Severity::warn;
    return Severity::fail;
}

namespace {

constexpr std::size_t kWorstOffenderCount = 3;

// Largest |value| first; ties keep canonical (row) order.
std::vector<WorstOffender> worst_offenders(const DisparityReport& report, bool use_ddp) {
    std::vector<WorstOffender> all;
    for (const auto& row : report.rows) {
        double v = use_ddp ? (row.ddp ? *row.ddp : 0.0) : row.dd;
        all.push_back({row.group, v});
    }
    std::stable_sort(all.begin(), all.end(), [](const WorstOffender& a, const WorstOffender& b) {
        return std::abs(a.value) > std::abs(b.value);
    });
    if (all.size() > kWorstOffenderCount) all.resize(kWorstOffenderCount);
    return all;
}

std::string narrative_for(BiasStage stage, const ObservedCohort& cohort,
                          const DemographicBenchmark& benchmark, const BiasFinding& finding) {
    const char* aggregate_name = stage == BiasStage::structural ? "TDDP" : "TDD";
    std::string text = std::string(bias_stage_name(stage)) + " audit of cohort '" +
                       cohort.label() + "' against benchmark '" + benchmark.name + "': " +
                       aggregate_name + "=" + format_fixed(finding.primary_tdd, 4) + ", " +
                       (stage == BiasStage::structural ? "NDDP" : "NDD") + "=" +
                       format_fixed(finding.primary_ndd, 4) + " -> " +
                       severity_name(finding.severity);
    if (!finding.worst_offenders.empty()) {
        const WorstOffender& top = finding.worst_offenders.front();
        text += "; largest gap: '" + top.group + "' (" +
                (stage == BiasStage::structural ? "DDP" : "DD") + "=" +
                format_fixed(top.value, 4) + ")";
    }
    return text;
}

}  // namespace

BiasFinding sampling_bias_audit(const ObservedCohort& training,
                                const DemographicBenchmark& benchmark,
                                const AuditConfig& config) {
    if (training.phase() != Phase::training) {
        fail(errc::phase_mismatch,
             "sampling audit needs a training cohort; '" + training.label() + "' is " +
                 phase_name(training.phase()));
    }
    BiasFinding finding;
    finding.stage = BiasStage::sampling;
    finding.phase = Phase::training;
    finding.disparity = build_disparity_report(benchmark, training, config.policy, config.nddp);
    finding.primary_tdd = finding.disparity.tdd;
    finding.primary_ndd = finding.disparity.ndd;
    finding.severity = severity_for(finding.primary_tdd, config.severity);
    finding.worst_offenders = worst_offenders(finding.disparity, false);
    finding.narrative = narrative_for(BiasStage::sampling, training, benchmark, finding);
    return finding;
}

BiasFinding deployment_bias_audit(const ObservedCohort& production,
                                  const DemographicBenchmark& benchmark,
                                  const std::optional<ObservedCohort>& training,
                                  const AuditConfig& config) {
    if (production.phase() != Phase::production) {
        fail(errc::phase_mismatch,
             "deployment audit needs a production cohort; '" + production.label() + "' is " +
                 phase_name(production.phase()));
    }
    BiasFinding finding;
    finding.stage = BiasStage::deployment;
    finding.phase = Phase::production;
    finding.disparity = build_disparity_report(benchmark, production, config.policy, config.nddp);
    finding.primary_tdd = finding.disparity.tdd;
    finding.primary_ndd = finding.disparity.ndd;
    // the benchmark governs severity; training drift is informational only
    finding.severity = severity_for(finding.primary_tdd, config.severity);
    finding.worst_offenders = worst_offenders(finding.disparity, false);
    finding.narrative = narrative_for(BiasStage::deployment, production, benchmark, finding);
    if (training) {
        AlignedDistributions vs_training = align_cohorts(*training, production);
        finding.training_drift_tdd = total_demographic_disparity(vs_training);
        finding.training_comparison_caveat = true;
        finding.narrative += "; production-vs-training TDD=" +
                             format_fixed(*finding.training_drift_tdd, 4) +
                             " (supplementary: training data is not ground truth)";
    }
    return finding;
}

BiasFinding structural_bias_audit(const ObservedCohort& cohort,
                                  const DemographicBenchmark& benchmark,
                                  const AuditConfig& config) {
    if (cohort.total_positive() == 0) {
        fail(errc::no_positives,
             "structural audit needs positive decisions; cohort '" + cohort.label() +
                 "' has none");
    }
    BiasFinding finding;
    finding.stage = BiasStage::structural;
    finding.phase = cohort.phase();
    finding.disparity = build_disparity_report(benchmark, cohort, config.policy, config.nddp);
    finding.primary_tdd = *finding.disparity.tddp;
    finding.primary_ndd = *finding.disparity.nddp;
    finding.severity = severity_for(finding.primary_tdd, config.severity);
    finding.worst_offenders = worst_offenders(finding.disparity, true);
    finding.narrative = narrative_for(BiasStage::structural, cohort, benchmark, finding);
    return finding;
}

DriftSeries drift_monitor(const std::vector<ObservedCohort>& windows,
                          const DemographicBenchmark& benchmark,
                          const DriftThresholds& thresholds,
                          const AuditConfig& config) {
    if (windows.empty()) {
        fail(errc::empty_window, "drift monitor needs at least one window");
    }
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const ObservedCohort& w = windows[i];
        if (w.phase() != Phase::production) {
            fail(errc::phase_mismatch, "drift window '" + w.label() + "' is not a production cohort");
        }
        if (w.total() == 0) {
            fail(errc::empty_window, "window '" + w.label() + "' has no people");
        }
        if (!w.window()) {
            fail(errc::unordered_windows, "window '" + w.label() + "' carries no time bounds");
        }
        if (i > 0) {
            const TimeWindow& prev = *windows[i - 1].window();
            const TimeWindow& cur = *w.window();
            if (cur.start < prev.end || cur.start < prev.start) {
                fail(errc::unordered_windows,
                     "windows '" + windows[i - 1].label() + "' and '" + w.label() +
                         "' overlap or are out of order");
            }
        }
    }

    DriftSeries series;
    series.benchmark_name = benchmark.name;
    series.benchmark_version = benchmark.version;
    series.thresholds = thresholds;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        DriftPoint point;
        point.label = windows[i].label();
        point.window = *windows[i].window();
        point.total = windows[i].total();
        point.tdd_vs_benchmark = total_demographic_disparity(
            align_groups(benchmark, windows[i], config.policy));
        if (i > 0) {
            point.step_tdd = total_demographic_disparity(align_cohorts(windows[i - 1], windows[i]));
        }
        if (point.tdd_vs_benchmark > thresholds.benchmark_tdd) {
            series.crossings.push_back(
                {i, "benchmark", point.tdd_vs_benchmark, thresholds.benchmark_tdd});
        }
        if (point.step_tdd && *point.step_tdd > thresholds.step_tdd) {
            series.crossings.push_back({i, "step", *point.step_tdd, thresholds.step_tdd});
        }
        series.points.push_back(std::move(point));
    }
    return series;
}

Ll144Result apply_ll144_exclusion(const ObservedCohort& cohort, double threshold) {
    if (cohort.groups().empty()) {
        fail(errc::empty_cohort, "cohort '" + cohort.label() + "' has no groups");
    }
    const double n = static_cast<double>(cohort.total());
    std::map<GroupKey, GroupCounts> retained;
    std::vector<GroupKey> excluded;
    for (const auto& [key, counts] : cohort.groups()) {
        const double share = n > 0.0 ? static_cast<double>(counts.total) / n : 0.0;
        // groups with no people carry no evidence, so they are excluded even
        // when the threshold is 0
        if (share < threshold || counts.total == 0) {
            excluded.push_back(key);
        } else {
            retained.emplace(key, counts);
        }
    }
    ObservedCohort filtered(cohort.label(), cohort.phase(), cohort.schema(), std::move(retained),
                            cohort.window());
    filtered.set_rejected_records(cohort.rejected_records());
    filtered.set_source_digest(cohort.source_digest());
    return Ll144Result{std::move(filtered), std::move(excluded), threshold};
}

}  // namespace demobench
