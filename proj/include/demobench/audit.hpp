#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demobench/config.hpp"
#include "demobench/disparity.hpp"

namespace demobench {

enum class BiasStage { sampling, deployment, structural };
enum class Severity { pass, warn, fail };

const char* bias_stage_name(BiasStage stage);
const char* severity_name(Severity severity);

Severity severity_for(double aggregate, const SeverityThresholds& thresholds);

struct WorstOffender {
    std::string group;
    double value = 0.0;  // DD_i (sampling/deployment) or DDP_i (structural)
};

/// One staged audit result. `primary_tdd`/`primary_ndd` hold TDD/NDD for the
/// sampling and deployment stages and TDDP/NDDP for the structural stage;
/// the full per-group table rides along in `disparity`.
struct BiasFinding {
    BiasStage stage = BiasStage::sampling;
    Phase phase = Phase::training;
    Severity severity = Severity::pass;
    double primary_tdd = 0.0;
    double primary_ndd = 0.0;
    DisparityReport disparity;
    std::vector<WorstOffender> worst_offenders;  // by |value| desc, ties canonical
    std::string narrative;

    // Deployment only: production-vs-training TDD, reported as a
    // supplementary diagnostic. The benchmark comparison governs; the
    // caveat flag marks that training data is not ground truth.
    std::optional<double> training_drift_tdd;
    bool training_comparison_caveat = false;
};

/// Training-data representation vs the benchmark (DD/TDD/NDD). The cohort
/// must be a training cohort.
BiasFinding sampling_bias_audit(const ObservedCohort& training,
                                const DemographicBenchmark& benchmark,
                                const AuditConfig& config = {});

/// Production population vs the benchmark. The benchmark — never the
/// training set — is the governing baseline; a supplied training cohort only
/// adds the supplementary drift diagnostic.
BiasFinding deployment_bias_audit(const ObservedCohort& production,
                                  const DemographicBenchmark& benchmark,
                                  const std::optional<ObservedCohort>& training = std::nullopt,
                                  const AuditConfig& config = {});

/// Positive-decision distribution vs the benchmark (DDP/TDDP/NDDP): who the
/// system selects, compared with who it should reach.
BiasFinding structural_bias_audit(const ObservedCohort& cohort,
                                  const DemographicBenchmark& benchmark,
                                  const AuditConfig& config = {});

struct DriftPoint {
    std::string label;
    TimeWindow window;
    std::int64_t total = 0;
    double tdd_vs_benchmark = 0.0;
    std::optional<double> step_tdd;  // vs previous window; absent for the first
};

struct DriftCrossing {
    std::size_t window_index = 0;
    std::string kind;  // "benchmark" or "step"
    double value = 0.0;
    double threshold = 0.0;
};

struct DriftSeries {
    std::string benchmark_name;
    std::string benchmark_version;
    DriftThresholds thresholds;
    std::vector<DriftPoint> points;
    std::vector<DriftCrossing> crossings;
};

/// Per-window TDD vs the benchmark plus consecutive-window TDD. Windows must
/// be production cohorts with bounds, time-ordered and non-overlapping.
DriftSeries drift_monitor(const std::vector<ObservedCohort>& windows,
                          const DemographicBenchmark& benchmark,
                          const DriftThresholds& thresholds,
                          const AuditConfig& config = {});

struct Ll144Result {
    ObservedCohort filtered;
    std::vector<GroupKey> excluded;
    double threshold = 0.0;
};

/// Removes groups whose observed share N_i/N falls below `threshold` (or
/// that have no people at all) from fairness-metric sweeps. Disparity
/// metrics are computed before exclusion so small groups never vanish from
/// disparity reporting; the excluded list is always returned.
Ll144Result apply_ll144_exclusion(const ObservedCohort& cohort, double threshold = 0.02);

}  // namespace demobench
