#include "demobench/disparity.hpp"

#include <cmath>

#include "demobench/errors.hpp"

namespace demobench {

const char* nddp_normalization_name(NddpNormalization mode) {
    return mode == NddpNormalization::by_expected ? "expected" : "positive-share";
}

NddpNormalization parse_nddp_normalization(const std::string& text) {
    if (text == "expected") return NddpNormalization::by_expected;
    if (text == "positive-share") return NddpNormalization::by_positive_share;
    fail(errc::invalid_config, "unknown NDDP normalization '" + text + "'");
}

std::map<GroupKey, double> demographic_disparity(const AlignedDistributions& aligned) {
    std::map<GroupKey, double> dd;
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        dd[aligned.groups[i]] = aligned.expected[i] - aligned.actual[i];
    }
    return dd;
}

double total_demographic_disparity(const AlignedDistributions& aligned) {
    // accumulated in canonical group order for run-to-run determinism
    double tdd = 0.0;
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        tdd += std::abs(aligned.expected[i] - aligned.actual[i]);
    }
    return tdd;
}

namespace {

NddResult normalized_disparity(const std::vector<GroupKey>& groups,
                               const std::vector<double>& reference,
                               const std::vector<double>& observed,
                               const std::vector<double>& normalizer) {
    NddResult result;
    double sum = 0.0;
    std::size_t included = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (normalizer[i] > 0.0) {
            sum += std::abs(reference[i] - observed[i]) / normalizer[i];
            ++included;
        } else {
            result.skipped.push_back(groups[i]);
        }
    }
    if (included == 0) {
        fail(errc::all_groups_skipped, "every group has a zero normalizer");
    }
    result.value = sum / static_cast<double>(included);
    return result;
}

}  // namespace

NddResult normalized_demographic_disparity(const AlignedDistributions& aligned) {
    return normalized_disparity(aligned.groups, aligned.expected, aligned.actual,
                                aligned.expected);
}

PositiveDisparities positive_decision_disparities(const AlignedDistributions& aligned,
                                                  NddpNormalization mode) {
    if (!aligned.positive_share) {
        fail(errc::no_positives, "aligned distributions carry no positive-decision shares");
    }
    const std::vector<double>& shares = *aligned.positive_share;
    PositiveDisparities out;
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        double ddp = aligned.expected[i] - shares[i];
        out.ddp[aligned.groups[i]] = ddp;
        out.tddp += std::abs(ddp);
    }
    const std::vector<double>& normalizer =
        mode == NddpNormalization::by_expected ? aligned.expected : shares;
    out.nddp = normalized_disparity(aligned.groups, aligned.expected, shares, normalizer);
    return out;
}

std::vector<DiagnosticEntry> render_diagnostics(const AttributeSchema& schema,
                                                const AlignmentDiagnostics& diagnostics) {
    std::vector<DiagnosticEntry> out;
    auto add = [&](const char* kind, const std::vector<GroupKey>& keys) {
        for (const auto& k : keys) out.push_back({kind, schema.group_label(k)});
    };
    add("benchmark-only", diagnostics.benchmark_only);
    add("cohort-only", diagnostics.cohort_only);
    add("dropped", diagnostics.dropped);
    add("zero-expected", diagnostics.zero_expected);
    add("zero-observed", diagnostics.zero_observed);
    return out;
}

DisparityReport build_disparity_report(const DemographicBenchmark& benchmark,
                                       const ObservedCohort& cohort,
                                       AlignmentPolicy policy,
                                       NddpNormalization nddp_mode) {
    AlignedDistributions aligned = align_groups(benchmark, cohort, policy);
    const AttributeSchema& schema = benchmark.schema;

    DisparityReport report;
    report.benchmark_name = benchmark.name;
    report.benchmark_version = benchmark.version;
    report.cohort_label = cohort.label();
    report.policy = policy;
    report.tdd = total_demographic_disparity(aligned);

    NddResult ndd = normalized_demographic_disparity(aligned);
    report.ndd = ndd.value;
    for (const auto& k : ndd.skipped) {
        report.skipped.push_back({schema.group_label(k), "expected proportion is zero (ndd)"});
    }

    std::optional<PositiveDisparities> positives;
    if (aligned.positive_share) {
        positives = positive_decision_disparities(aligned, nddp_mode);
        report.tddp = positives->tddp;
        report.nddp = positives->nddp.value;
        for (const auto& k : positives->nddp.skipped) {
            report.skipped.push_back(
                {schema.group_label(k),
                 nddp_mode == NddpNormalization::by_expected
                     ? "expected proportion is zero (nddp)"
                     : "positive share is zero (nddp)"});
        }
    }

    for (std::size_t i = 0; i < aligned.size(); ++i) {
        DisparityRow row;
        row.group = schema.group_label(aligned.groups[i]);
        row.expected = aligned.expected[i];
        row.actual = aligned.actual[i];
        row.dd = aligned.expected[i] - aligned.actual[i];
        if (aligned.positive_share) {
            row.positive_share = (*aligned.positive_share)[i];
            row.ddp = positives->ddp.at(aligned.groups[i]);
        }
        report.rows.push_back(std::move(row));
    }
    report.diagnostics = render_diagnostics(schema, aligned.diagnostics);
    return report;
}

}  // namespace demobench
