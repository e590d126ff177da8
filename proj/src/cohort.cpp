#include "demobench/cohort.hpp"

#include "demobench/errors.hpp"

namespace demobench {

const char* phase_name(Phase phase) {
    return phase == Phase::training ? "training" : "production";
}

Phase parse_phase(const std::string& text) {
    if (text == "training") return Phase::training;
    if (text == "production") return Phase::production;
    fail(errc::invalid_config, "unknown phase '" + text + "' (expected training|production)");
}

ObservedCohort::ObservedCohort(std::string label,
                               Phase phase,
                               AttributeSchema schema,
                               std::map<GroupKey, GroupCounts> groups,
                               std::optional<TimeWindow> window)
    : label_(std::move(label)),
      phase_(phase),
      schema_(std::move(schema)),
      groups_(std::move(groups)),
      window_(window) {
    if (window_ && window_->start > window_->end) {
        fail(errc::unordered_windows,
             "cohort '" + label_ + "': window start is after its end");
    }
    for (const auto& [key, counts] : groups_) {
        if (!schema_.contains(key)) {
            fail(errc::unknown_group, "cohort '" + label_ + "' has a group outside its schema");
        }
        const std::string group = schema_.group_label(key);
        if (counts.total < 0 || counts.positive < 0) {
            fail(errc::count_inconsistency,
                 "cohort '" + label_ + "', group '" + group + "': negative count");
        }
        if (counts.positive > counts.total) {
            fail(errc::count_inconsistency,
                 "cohort '" + label_ + "', group '" + group + "': positives (" +
                     std::to_string(counts.positive) + ") exceed total (" +
                     std::to_string(counts.total) + ")");
        }
        if (counts.confusion) {
            const Confusion& c = *counts.confusion;
            if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0) {
                fail(errc::count_inconsistency,
                     "cohort '" + label_ + "', group '" + group + "': negative confusion count");
            }
            if (c.tp + c.fp + c.fn + c.tn != counts.total) {
                fail(errc::count_inconsistency,
                     "cohort '" + label_ + "', group '" + group +
                         "': confusion counts do not sum to the group total");
            }
            if (c.tp + c.fp != counts.positive) {
                fail(errc::count_inconsistency,
                     "cohort '" + label_ + "', group '" + group +
                         "': TP+FP does not equal the positive count");
            }
            has_confusion_ = true;
        }
        total_ += counts.total;
        total_positive_ += counts.positive;
    }
}

ObservedCohort ObservedCohort::with_phase(Phase phase) const {
    ObservedCohort copy = *this;
    copy.phase_ = phase;
    return copy;
}

std::map<GroupKey, double> observed_proportions(const ObservedCohort& cohort) {
    if (cohort.total() == 0) {
        fail(errc::empty_cohort, "cohort '" + cohort.label() + "' has no people");
    }
    const double n = static_cast<double>(cohort.total());
    std::map<GroupKey, double> out;
    for (const auto& [key, counts] : cohort.groups()) {
        out[key] = static_cast<double>(counts.total) / n;
    }
    return out;
}

std::map<GroupKey, double> positive_shares(const ObservedCohort& cohort) {
    if (cohort.total_positive() == 0) {
        fail(errc::no_positives, "cohort '" + cohort.label() + "' has no positive decisions");
    }
    const double m = static_cast<double>(cohort.total_positive());
    std::map<GroupKey, double> out;
    for (const auto& [key, counts] : cohort.groups()) {
        out[key] = static_cast<double>(counts.positive) / m;
    }
    return out;
}

}  // namespace demobench
