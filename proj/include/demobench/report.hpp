#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demobench/audit.hpp"
#include "demobench/benchmark.hpp"
#include "demobench/fairness.hpp"

namespace demobench {

enum class RenderMode { structured, human };

RenderMode parse_render_mode(const std::string& text);

struct CohortIdentity {
    std::string label;
    Phase phase = Phase::production;
    std::optional<TimeWindow> window;
    std::int64_t total = 0;
    std::int64_t positives = 0;
    std::int64_t rejected_records = 0;
    std::string source_digest;
};

struct FairnessRow {
    std::string metric;
    std::optional<double> value;
    double lower = 0.0;
    double upper = 0.0;
    double ideal = 0.0;
    std::string verdict;
    std::string underprivileged;
    std::string privileged;
    std::string note;
};

struct FairnessBlock {
    std::string reference;
    std::string strategy;
    std::vector<FairnessRow> rows;
};

struct ExclusionEcho {
    double threshold = 0.0;
    std::vector<std::string> excluded;
    std::size_t retained = 0;
};

/// The serialized embodiment of one audit invocation. The digest covers the
/// structured form with the timestamp blanked, so identical inputs yield an
/// identical digest across runs.
struct AuditReport {
    std::string tool_version;
    std::string timestamp;
    std::string benchmark_name;
    std::string benchmark_version;
    std::string benchmark_digest;
    std::vector<CohortIdentity> cohorts;
    std::string config_echo;  // effective settings, rendered as "key=value;..."
    std::optional<ExclusionEcho> exclusions;
    std::vector<DisparityReport> disparity;
    std::optional<FairnessBlock> fairness;
    std::vector<BiasFinding> findings;
    std::optional<DriftSeries> drift;
};

CohortIdentity describe_cohort(const ObservedCohort& cohort);

/// Digest of a benchmark's canonical serialized form.
std::string benchmark_digest(const DemographicBenchmark& benchmark);

/// Renders effective settings as a deterministic "key=value;..." string
/// (fixed key order), so reports reproduce every non-default setting.
std::string echo_config(const AuditConfig& config);

FairnessBlock render_fairness_block(const AttributeSchema& schema,
                                    const GroupKey& reference,
                                    ReferenceStrategy strategy,
                                    const std::vector<FairnessAssessment>& assessments);

/// Structured mode: a stable, schema-versioned JSON document. Human mode: a
/// fixed-layout table digest. Both deterministic for identical inputs.
std::string render_report(const AuditReport& report, RenderMode mode);

std::string render_drift_report(const DriftSeries& series, RenderMode mode);

/// True when any finding is Warn or Fail (drives the CLI exit code).
bool any_adverse_finding(const AuditReport& report);

/// Fixed-point decimal with half-even rounding, used by human-readable
/// output only; stored values stay full precision.
std::string format_fixed(double value, int decimals);

}  // namespace demobench
