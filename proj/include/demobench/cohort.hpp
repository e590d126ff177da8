#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "demobench/schema.hpp"

namespace demobench {

enum class Phase { training, production };

const char* phase_name(Phase phase);
Phase parse_phase(const std::string& text);

/// Half-open time interval [start, end), epoch seconds UTC.
struct TimeWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;
};

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

struct GroupCounts {
    std::int64_t total = 0;
    std::int64_t positive = 0;
    std::optional<Confusion> confusion;
};

/// Per-group observed counts for one phase/window. Counts are integers
/// (persons); all derived proportions are 64-bit reals. Immutable after
/// construction; every operation over it is a pure function.
///
/// A cohort with zero total is constructible (an empty production window is
/// a real situation) — operations that need mass throw EmptyCohort.
class ObservedCohort {
public:
    ObservedCohort(std::string label,
                   Phase phase,
                   AttributeSchema schema,
                   std::map<GroupKey, GroupCounts> groups,
                   std::optional<TimeWindow> window = std::nullopt);

    const std::string& label() const { return label_; }
    Phase phase() const { return phase_; }
    const AttributeSchema& schema() const { return schema_; }
    const std::map<GroupKey, GroupCounts>& groups() const { return groups_; }
    const std::optional<TimeWindow>& window() const { return window_; }

    std::int64_t total() const { return total_; }
    std::int64_t total_positive() const { return total_positive_; }
    bool has_confusion() const { return has_confusion_; }

    /// Records rejected by ingestion (missing attribute values); carried for
    /// reporting only.
    std::int64_t rejected_records() const { return rejected_records_; }
    void set_rejected_records(std::int64_t n) { rejected_records_ = n; }

    /// Digest of the source file content when the cohort was loaded from one.
    const std::string& source_digest() const { return source_digest_; }
    void set_source_digest(std::string digest) { source_digest_ = std::move(digest); }

    /// Returns a copy with a different phase tag (grouping data unchanged).
    ObservedCohort with_phase(Phase phase) const;

private:
    std::string label_;
    Phase phase_;
    AttributeSchema schema_;
    std::map<GroupKey, GroupCounts> groups_;
    std::optional<TimeWindow> window_;
    std::int64_t total_ = 0;
    std::int64_t total_positive_ = 0;
    bool has_confusion_ = false;
    std::int64_t rejected_records_ = 0;
    std::string source_digest_;
};

/// R_i = N_i / N for every group present. Sum is 1 within 1e-9.
/// Throws EmptyCohort when N = 0.
std::map<GroupKey, double> observed_proportions(const ObservedCohort& cohort);

/// share_i = Pos_i / sum(Pos). Sum is 1 within 1e-9.
/// Throws NoPositives when no positive decisions exist.
std::map<GroupKey, double> positive_shares(const ObservedCohort& cohort);

}  // namespace demobench
