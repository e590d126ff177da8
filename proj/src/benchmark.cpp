#include "demobench/benchmark.hpp"

#include <cmath>

#include "demobench/errors.hpp"

namespace demobench {

const char* raw_kind_name(RawKind kind) {
    switch (kind) {
        case RawKind::counts: return "counts";
        case RawKind::percentages: return "percentages";
        case RawKind::proportions: return "proportions";
    }
    return "?";
}

double DemographicBenchmark::total_proportion() const {
    double sum = 0.0;
    for (const auto& [key, p] : entries) sum += p;
    return sum;
}

DemographicBenchmark normalize_benchmark(const AttributeSchema& schema,
                                         const std::map<GroupKey, double>& raw_values,
                                         RawKind kind,
                                         std::string name,
                                         std::string provenance) {
    double total = 0.0;
    for (const auto& [key, value] : raw_values) {
        if (!schema.contains(key)) {
            fail(errc::unknown_group, "benchmark entry outside the schema group space");
        }
        if (value < 0.0 || !std::isfinite(value)) {
            fail(errc::negative_input,
                 "negative or non-finite input for group '" + schema.group_label(key) + "'");
        }
        total += value;
    }
    if (total == 0.0) {
        fail(errc::zero_mass, "all benchmark inputs are zero");
    }
    // Published tables carry rounding; a sum far outside the expected band
    // means a mis-keyed table, not rounding.
    if (kind == RawKind::percentages && (total < 99.5 || total > 100.5)) {
        fail(errc::count_inconsistency,
             "percentage column sums to " + std::to_string(total) + ", outside 100 +/- 0.5");
    }
    if (kind == RawKind::proportions && (total < 0.995 || total > 1.005)) {
        fail(errc::count_inconsistency,
             "proportion column sums to " + std::to_string(total) + ", outside 1 +/- 0.005");
    }

    DemographicBenchmark benchmark{std::move(name), "", schema, {}, raw_values,
                                   std::move(provenance)};
    for (const auto& [key, value] : raw_values) {
        benchmark.entries[key] = value / total;
    }
    return benchmark;
}

void validate_benchmark(const DemographicBenchmark& benchmark) {
    if (benchmark.entries.empty()) {
        fail(errc::zero_mass, "benchmark '" + benchmark.name + "' has no entries");
    }
    double sum = 0.0;
    for (const auto& [key, p] : benchmark.entries) {
        if (!benchmark.schema.contains(key)) {
            fail(errc::unknown_group,
                 "benchmark '" + benchmark.name + "' has an entry outside its schema");
        }
        if (p < 0.0 || !std::isfinite(p)) {
            fail(errc::negative_input, "benchmark '" + benchmark.name + "' has a negative proportion");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        fail(errc::count_inconsistency,
             "benchmark '" + benchmark.name + "' proportions sum to " + std::to_string(sum));
    }
}

}  // namespace demobench
