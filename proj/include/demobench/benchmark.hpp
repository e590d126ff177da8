#pragma once

#include <map>
#include <string>

#include "demobench/schema.hpp"

namespace demobench {

/// How raw benchmark inputs are expressed. The sum-band check differs:
/// percentages must sum to 100 +/- 0.5 and proportions to 1 +/- 0.005
/// (tolerates published rounding, rejects mis-keyed tables); counts may sum
/// to anything positive.
enum class RawKind { counts, percentages, proportions };

const char* raw_kind_name(RawKind kind);

/// A named reference population: expected proportion per group. Entries are
/// normalized fractions summing to 1 (within 1e-6); raw inputs are kept
/// alongside. A benchmark may cover a subset of the schema's group space —
/// coverage gaps surface later as alignment diagnostics.
struct DemographicBenchmark {
    std::string name;
    std::string version;  // assigned by the store; empty until saved
    AttributeSchema schema;
    std::map<GroupKey, double> entries;  // normalized proportions
    std::map<GroupKey, double> raw;      // inputs as given
    std::string provenance;

    double total_proportion() const;
};

/// Divides each raw value by the column total. Guards: NegativeInput,
/// ZeroMass when everything is 0, and for percentage/proportion inputs a
/// sum outside the accepted band (count_inconsistency).
DemographicBenchmark normalize_benchmark(const AttributeSchema& schema,
                                         const std::map<GroupKey, double>& raw_values,
                                         RawKind kind,
                                         std::string name,
                                         std::string provenance);

/// Checks the normalization invariant (sum within 1e-6 of 1, no negatives,
/// keys belong to the schema). Throws AuditError on violation.
void validate_benchmark(const DemographicBenchmark& benchmark);

}  // namespace demobench
