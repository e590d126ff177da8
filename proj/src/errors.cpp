#include "demobench/errors.hpp"

namespace demobench {

const char* errc_name(errc code) {
    switch (code) {
        case errc::empty_cohort: return "EmptyCohort";
        case errc::no_positives: return "NoPositives";
        case errc::zero_mass: return "ZeroMass";
        case errc::negative_input: return "NegativeInput";
        case errc::parse_error: return "ParseError";
        case errc::unknown_attribute_value: return "UnknownAttributeValue";
        case errc::duplicate_group: return "DuplicateGroup";
        case errc::mixed_labels: return "MixedLabels";
        case errc::count_inconsistency: return "CountInconsistency";
        case errc::schema_mismatch: return "SchemaMismatch";
        case errc::group_mismatch: return "GroupMismatch";
        case errc::all_groups_skipped: return "AllGroupsSkipped";
        case errc::missing_labels: return "MissingLabels";
        case errc::phase_mismatch: return "PhaseMismatch";
        case errc::unordered_windows: return "UnorderedWindows";
        case errc::empty_window: return "EmptyWindow";
        case errc::unknown_group: return "UnknownGroup";
        case errc::version_collision: return "VersionCollision";
        case errc::io_error: return "IoError";
        case errc::invalid_schema: return "InvalidSchema";
        case errc::invalid_config: return "InvalidConfig";
        case errc::invalid_name: return "InvalidName";
    }
    return "UnknownError";
}

}  // namespace demobench
