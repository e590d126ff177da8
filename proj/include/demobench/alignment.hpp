#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demobench/benchmark.hpp"
#include "demobench/cohort.hpp"

namespace demobench {

enum class AlignmentPolicy {
    strict,           // any group-set mismatch is an error
    union_zero_fill,  // missing side gets 0; both sides renormalized over the union
    intersect,        // unmatched groups dropped and reported; both sides renormalized
};

const char* alignment_policy_name(AlignmentPolicy policy);
AlignmentPolicy parse_alignment_policy(const std::string& text);

struct AlignmentDiagnostics {
    std::vector<GroupKey> benchmark_only;  // in benchmark entries, absent from cohort
    std::vector<GroupKey> cohort_only;     // in cohort, absent from benchmark entries
    std::vector<GroupKey> dropped;         // removed by the intersect policy
    std::vector<GroupKey> zero_expected;   // P_i = 0 after alignment
    std::vector<GroupKey> zero_observed;   // R_i = 0 after alignment

    bool empty() const {
        return benchmark_only.empty() && cohort_only.empty() && dropped.empty() &&
               zero_expected.empty() && zero_observed.empty();
    }
};

/// Expected (P) and actual (R) distributions over one shared group list in
/// canonical order, each renormalized to sum to 1 over the aligned set.
/// Positive-decision shares (S) ride along when the cohort has positives.
struct AlignedDistributions {
    AttributeSchema schema;
    std::vector<GroupKey> groups;
    std::vector<double> expected;
    std::vector<double> actual;
    std::optional<std::vector<double>> positive_share;
    AlignmentDiagnostics diagnostics;

    std::size_t size() const { return groups.size(); }
};

/// Joins a benchmark's entry set with a cohort's group set under the given
/// policy. Throws SchemaMismatch when the two schemas differ, GroupMismatch
/// under the strict policy, EmptyCohort when the cohort has no people.
AlignedDistributions align_groups(const DemographicBenchmark& benchmark,
                                  const ObservedCohort& cohort,
                                  AlignmentPolicy policy);

/// Cohort-vs-cohort alignment over the union of their group sets (used for
/// supplementary production-vs-training drift). `baseline` plays the role of
/// the expected side.
AlignedDistributions align_cohorts(const ObservedCohort& baseline, const ObservedCohort& current);

}  // namespace demobench
