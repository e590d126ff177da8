#include "demobench/config.hpp"

#include <charconv>

#include "demobench/detail/csv.hpp"
#include "demobench/errors.hpp"

namespace demobench {

namespace {

double parse_config_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        fail(errc::invalid_config, "setting '" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

void apply_fair_range_setting(AuditConfig& config, const std::string& key,
                              const std::string& value) {
    // fair_range.<metric>.<field>
    std::string rest = key.substr(11);
    std::size_t dot = rest.find('.');
    if (dot == std::string::npos) {
        fail(errc::invalid_config, "expected fair_range.<metric>.<lower|upper|ideal>: '" + key + "'");
    }
    std::string metric = rest.substr(0, dot);
    std::string field = rest.substr(dot + 1);
    FairRange& range = config.fair_ranges.by_id(metric);
    double v = parse_config_double(key, value);
    if (field == "lower") range.lower = v;
    else if (field == "upper") range.upper = v;
    else if (field == "ideal") range.ideal = v;
    else fail(errc::invalid_config, "unknown fair-range field '" + field + "'");
    // re-validate the adjusted range
    make_fair_range(range.metric, range.lower, range.upper, range.ideal);
}

}  // namespace

void apply_config_setting(AuditConfig& config, const std::string& key, const std::string& value) {
    if (key == "tdd_pass") config.severity.pass = parse_config_double(key, value);
    else if (key == "tdd_warn") config.severity.warn = parse_config_double(key, value);
    else if (key == "alignment_policy") config.policy = parse_alignment_policy(value);
    else if (key == "reference_strategy") config.reference_strategy = parse_reference_strategy(value);
    else if (key == "reference_group") config.reference_group = value;
    else if (key == "ll144_threshold") config.ll144_threshold = parse_config_double(key, value);
    else if (key == "nddp_normalization") config.nddp = parse_nddp_normalization(value);
    else if (key == "drift_threshold_benchmark") config.drift.benchmark_tdd = parse_config_double(key, value);
    else if (key == "drift_threshold_step") config.drift.step_tdd = parse_config_double(key, value);
    else if (key.rfind("fair_range.", 0) == 0) apply_fair_range_setting(config, key, value);
    else fail(errc::invalid_config, "unknown setting '" + key + "'");

    if (config.severity.pass < 0.0 || config.severity.warn < config.severity.pass) {
        fail(errc::invalid_config, "severity thresholds must satisfy 0 <= tdd_pass <= tdd_warn");
    }
    if (config.ll144_threshold < 0.0 || config.ll144_threshold >= 1.0) {
        fail(errc::invalid_config, "ll144_threshold must lie in [0, 1)");
    }
}

AuditConfig parse_config_file(const std::string& content, AuditConfig base) {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= content.size()) {
        std::size_t nl = content.find('\n', pos);
        std::string line = content.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = (nl == std::string::npos) ? content.size() + 1 : nl + 1;
        ++line_no;
        std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(errc::invalid_config,
                 "line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                     stripped + "'");
        }
        std::string key = detail::trim(stripped.substr(0, eq));
        std::string value = detail::trim(stripped.substr(eq + 1));
        try {
            apply_config_setting(base, key, value);
        } catch (const AuditError& e) {
            fail(errc::invalid_config, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

}  // namespace demobench
