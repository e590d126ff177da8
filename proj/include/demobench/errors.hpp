#pragma once

#include <stdexcept>
#include <string>

namespace demobench {

// Every failure the toolkit can report, so tests and callers can match on
// the kind instead of parsing message text.
enum class errc {
    empty_cohort,
    no_positives,
    zero_mass,
    negative_input,
    parse_error,
    unknown_attribute_value,
    duplicate_group,
    mixed_labels,
    count_inconsistency,
    schema_mismatch,
    group_mismatch,
    all_groups_skipped,
    missing_labels,
    phase_mismatch,
    unordered_windows,
    empty_window,
    unknown_group,
    version_collision,
    io_error,
    invalid_schema,
    invalid_config,
    invalid_name,
};

const char* errc_name(errc code);

class AuditError : public std::runtime_error {
public:
    AuditError(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw AuditError(code, message);
}

}  // namespace demobench
