#include "demobench/alignment.hpp"

#include <cmath>
#include <set>

#include "demobench/errors.hpp"

namespace demobench {

const char* alignment_policy_name(AlignmentPolicy policy) {
    switch (policy) {
        case AlignmentPolicy::strict: return "strict";
        case AlignmentPolicy::union_zero_fill: return "union-zero-fill";
        case AlignmentPolicy::intersect: return "intersect";
    }
    return "?";
}

AlignmentPolicy parse_alignment_policy(const std::string& text) {
    if (text == "strict") return AlignmentPolicy::strict;
    if (text == "union-zero-fill" || text == "union") return AlignmentPolicy::union_zero_fill;
    if (text == "intersect") return AlignmentPolicy::intersect;
    fail(errc::invalid_config, "unknown alignment policy '" + text + "'");
}

namespace {

void renormalize(std::vector<double>& values, errc on_zero, const char* what) {
    double sum = 0.0;
    for (double v : values) sum += v;
    if (sum <= 0.0) {
        fail(on_zero, std::string(what) + " has no mass over the aligned groups");
    }
    for (double& v : values) v /= sum;
}

AlignedDistributions align_maps(const AttributeSchema& schema,
                                const std::map<GroupKey, double>& expected,
                                const std::map<GroupKey, double>& actual,
                                const std::optional<std::map<GroupKey, double>>& shares,
                                AlignmentPolicy policy,
                                const std::string& expected_what,
                                const std::string& actual_what) {
    AlignedDistributions out{schema, {}, {}, {}, std::nullopt, {}};

    std::set<GroupKey> keys;
    for (const auto& [k, v] : expected) keys.insert(k);
    for (const auto& [k, v] : actual) keys.insert(k);
    for (const auto& k : keys) {
        bool in_expected = expected.count(k) > 0;
        bool in_actual = actual.count(k) > 0;
        if (!in_actual) out.diagnostics.benchmark_only.push_back(k);
        if (!in_expected) out.diagnostics.cohort_only.push_back(k);
    }

    switch (policy) {
        case AlignmentPolicy::strict: {
            if (!out.diagnostics.benchmark_only.empty() || !out.diagnostics.cohort_only.empty()) {
                const GroupKey& offender = out.diagnostics.benchmark_only.empty()
                                               ? out.diagnostics.cohort_only.front()
                                               : out.diagnostics.benchmark_only.front();
                fail(errc::group_mismatch,
                     "strict alignment: group '" + schema.group_label(offender) +
                         "' is present on only one side");
            }
            for (const auto& k : keys) out.groups.push_back(k);
            break;
        }
        case AlignmentPolicy::union_zero_fill: {
            for (const auto& k : keys) out.groups.push_back(k);
            break;
        }
        case AlignmentPolicy::intersect: {
            for (const auto& k : keys) {
                if (expected.count(k) && actual.count(k)) {
                    out.groups.push_back(k);
                } else {
                    out.diagnostics.dropped.push_back(k);
                }
            }
            if (out.groups.empty()) {
                fail(errc::group_mismatch, "intersect alignment: no shared groups");
            }
            break;
        }
    }

    auto value_or_zero = [](const std::map<GroupKey, double>& m, const GroupKey& k) {
        auto it = m.find(k);
        return it == m.end() ? 0.0 : it->second;
    };
    for (const auto& k : out.groups) {
        out.expected.push_back(value_or_zero(expected, k));
        out.actual.push_back(value_or_zero(actual, k));
    }
    renormalize(out.expected, errc::zero_mass, expected_what.c_str());
    renormalize(out.actual, errc::empty_cohort, actual_what.c_str());

    if (shares) {
        std::vector<double> s;
        double mass = 0.0;
        for (const auto& k : out.groups) {
            s.push_back(value_or_zero(*shares, k));
            mass += s.back();
        }
        // shares can lose all mass under intersect; then they simply drop out
        if (mass > 0.0) {
            for (double& v : s) v /= mass;
            out.positive_share = std::move(s);
        }
    }

    for (std::size_t i = 0; i < out.groups.size(); ++i) {
        if (out.expected[i] == 0.0) out.diagnostics.zero_expected.push_back(out.groups[i]);
        if (out.actual[i] == 0.0) out.diagnostics.zero_observed.push_back(out.groups[i]);
    }
    return out;
}

}  // namespace

AlignedDistributions align_groups(const DemographicBenchmark& benchmark,
                                  const ObservedCohort& cohort,
                                  AlignmentPolicy policy) {
    if (!benchmark.schema.same_definition(cohort.schema())) {
        fail(errc::schema_mismatch,
             "benchmark '" + benchmark.name + "' and cohort '" + cohort.label() +
                 "' use different schemas");
    }
    std::optional<std::map<GroupKey, double>> shares;
    if (cohort.total_positive() > 0) {
        shares = positive_shares(cohort);
    }
    return align_maps(benchmark.schema, benchmark.entries, observed_proportions(cohort), shares,
                      policy, "benchmark '" + benchmark.name + "'",
                      "cohort '" + cohort.label() + "'");
}

AlignedDistributions align_cohorts(const ObservedCohort& baseline, const ObservedCohort& current) {
    if (!baseline.schema().same_definition(current.schema())) {
        fail(errc::schema_mismatch,
             "cohorts '" + baseline.label() + "' and '" + current.label() +
                 "' use different schemas");
    }
    return align_maps(baseline.schema(), observed_proportions(baseline),
                      observed_proportions(current), std::nullopt,
                      AlignmentPolicy::union_zero_fill,
                      "cohort '" + baseline.label() + "'",
                      "cohort '" + current.label() + "'");
}

}  // namespace demobench
