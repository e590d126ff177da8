#pragma once

#include <optional>
#include <string>

#include "demobench/alignment.hpp"
#include "demobench/disparity.hpp"
#include "demobench/fairness.hpp"

namespace demobench {

/// Severity cutoffs applied to TDD (sampling/deployment) and TDDP
/// (structural). These are toolkit defaults, not externally mandated values;
/// override via configuration.
struct SeverityThresholds {
    double pass = 0.05;  // Pass when aggregate <= pass
    double warn = 0.15;  // Warn when aggregate <= warn; Fail above
};

struct DriftThresholds {
    double benchmark_tdd = 0.15;  // window-vs-benchmark crossing level
    double step_tdd = 0.15;       // consecutive-window crossing level
};

/// Effective settings for one audit invocation. Precedence: CLI flag >
/// config file > these defaults.
struct AuditConfig {
    SeverityThresholds severity;
    AlignmentPolicy policy = AlignmentPolicy::union_zero_fill;
    ReferenceStrategy reference_strategy = ReferenceStrategy::largest;
    std::optional<std::string> reference_group;  // label, parsed against the schema at use
    bool ll144_enabled = false;
    double ll144_threshold = 0.02;
    NddpNormalization nddp = NddpNormalization::by_expected;
    DriftThresholds drift;
    FairRangeSet fair_ranges;
};

/// Applies one `key = value` setting. Unknown keys and unparsable values are
/// InvalidConfig. Keys:
///   tdd_pass, tdd_warn, alignment_policy, reference_strategy,
///   reference_group, ll144_threshold, nddp_normalization,
///   drift_threshold_benchmark, drift_threshold_step,
///   fair_range.{eod|od|spd|di}.{lower|upper|ideal}
void apply_config_setting(AuditConfig& config, const std::string& key, const std::string& value);

/// Flat key-value document: one `key = value` per line, '#' comments.
AuditConfig parse_config_file(const std::string& content, AuditConfig base = {});

}  // namespace demobench
