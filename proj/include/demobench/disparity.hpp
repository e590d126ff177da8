#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "demobench/alignment.hpp"

namespace demobench {

/// DD_i = P_i - R_i for every aligned group (expected minus actual; positive
/// means under-representation). The signed values sum to 0 within 1e-9.
std::map<GroupKey, double> demographic_disparity(const AlignedDistributions& aligned);

/// TDD = sum_i |P_i - R_i|, accumulated in canonical group order. In [0, 2].
double total_demographic_disparity(const AlignedDistributions& aligned);

struct NddResult {
    double value = 0.0;
    std::vector<GroupKey> skipped;  // groups with zero normalizer, excluded from n
};

/// NDD = (1/n) sum |P_i - R_i| / P_i over groups with P_i > 0; n counts only
/// the included groups. Throws AllGroupsSkipped when every P_i = 0.
NddResult normalized_demographic_disparity(const AlignedDistributions& aligned);

/// Normalizer for NDDP. The default divides by the expected proportion P_i,
/// keeping NDD and NDDP structurally parallel and defined whenever P_i > 0.
/// `by_positive_share` divides by the group's positive-decision share
/// instead and skips groups with zero positives.
enum class NddpNormalization { by_expected, by_positive_share };

const char* nddp_normalization_name(NddpNormalization mode);
NddpNormalization parse_nddp_normalization(const std::string& text);

struct PositiveDisparities {
    std::map<GroupKey, double> ddp;  // DDP_i = P_i - S_i
    double tddp = 0.0;
    NddResult nddp;
};

/// Positive-decision disparity family over the aligned shares S.
/// Throws NoPositives when shares are absent, AllGroupsSkipped when no group
/// has a usable normalizer.
PositiveDisparities positive_decision_disparities(
    const AlignedDistributions& aligned,
    NddpNormalization mode = NddpNormalization::by_expected);

// Report types are plain rendered data: groups appear as canonical labels
// ("value1|value2"), rows in canonical order.

struct DisparityRow {
    std::string group;
    double expected = 0.0;                 // P_i
    double actual = 0.0;                   // R_i
    std::optional<double> positive_share;  // S_i
    double dd = 0.0;
    std::optional<double> ddp;
};

struct SkipEntry {
    std::string group;
    std::string reason;
};

struct DiagnosticEntry {
    std::string kind;  // benchmark-only | cohort-only | dropped | zero-expected | zero-observed
    std::string group;
};

/// Everything an auditor needs from one benchmark/cohort comparison: the
/// per-group table, the aggregates, and which groups were skipped or flagged.
struct DisparityReport {
    std::string benchmark_name;
    std::string benchmark_version;
    std::string cohort_label;
    AlignmentPolicy policy = AlignmentPolicy::union_zero_fill;
    std::vector<DisparityRow> rows;
    double tdd = 0.0;
    double ndd = 0.0;
    std::optional<double> tddp;
    std::optional<double> nddp;
    std::vector<SkipEntry> skipped;
    std::vector<DiagnosticEntry> diagnostics;
};

DisparityReport build_disparity_report(const DemographicBenchmark& benchmark,
                                       const ObservedCohort& cohort,
                                       AlignmentPolicy policy,
                                       NddpNormalization nddp_mode = NddpNormalization::by_expected);

std::vector<DiagnosticEntry> render_diagnostics(const AttributeSchema& schema,
                                                const AlignmentDiagnostics& diagnostics);

}  // namespace demobench
