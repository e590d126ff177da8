#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demobench/cohort.hpp"

namespace demobench {

/// Inclusive acceptance interval for one fairness metric.
struct FairRange {
    std::string metric;
    double lower = 0.0;
    double upper = 0.0;
    double ideal = 0.0;
};

/// Validates lower <= ideal <= upper; throws AuditError(invalid_config).
FairRange make_fair_range(std::string metric, double lower, double upper, double ideal);

/// The four metric ranges used by assessments. Defaults: EOD/OD/SPD fair in
/// [-0.1, 0.1] with ideal 0; DI fair in [0.8, 1.2] with ideal 1.
struct FairRangeSet {
    FairRange eod = {"eod", -0.1, 0.1, 0.0};
    FairRange od = {"od", -0.1, 0.1, 0.0};
    FairRange spd = {"spd", -0.1, 0.1, 0.0};
    FairRange di = {"di", 0.8, 1.2, 1.0};

    FairRange& by_id(const std::string& metric);
    const FairRange& by_id(const std::string& metric) const;
};

/// Confusion-derived rates for one group. TPR/FPR are absent when their
/// denominator is zero or when the cohort carries no labels (the note says
/// which). PPP = Pos_i / N with N the cohort total population, so it is
/// defined whenever the cohort has people.
struct GroupRates {
    GroupKey group;
    std::int64_t total = 0;
    std::int64_t positive = 0;
    std::optional<Confusion> confusion;
    std::optional<double> tpr;
    std::optional<double> fpr;
    double ppp = 0.0;
    std::string tpr_note;  // empty when tpr is present
    std::string fpr_note;
};

/// Rates for `group` within `cohort`. A group absent from the cohort is
/// UnknownGroup if it is also outside the schema; otherwise it contributes
/// zero counts. Throws EmptyCohort when the cohort has no people.
GroupRates group_rates(const ObservedCohort& cohort, const GroupKey& group);

enum class Verdict { fair, unfair, undefined };

const char* verdict_name(Verdict verdict);

/// Fair iff value lies inside [lower, upper], endpoints included.
Verdict classify(double value, const FairRange& range);

struct FairnessAssessment {
    std::string metric;  // eod | od | spd | di
    std::optional<double> value;
    FairRange range;
    Verdict verdict = Verdict::undefined;
    GroupKey underprivileged;
    GroupKey privileged;
    std::string note;  // reason when undefined
};

/// EOD = TPR_UG - TPR_PG. Undefined when either TPR is.
FairnessAssessment equal_opportunity_difference(const ObservedCohort& cohort,
                                                const GroupKey& underprivileged,
                                                const GroupKey& privileged,
                                                const FairRange& range = FairRangeSet{}.eod);

/// OD = (FPR_UG - FPR_PG) + (TPR_UG - TPR_PG).
FairnessAssessment odds_difference(const ObservedCohort& cohort,
                                   const GroupKey& underprivileged,
                                   const GroupKey& privileged,
                                   const FairRange& range = FairRangeSet{}.od);

/// SPD = PPP_UG - PPP_PG. Needs no labels, so it applies in production.
FairnessAssessment statistical_parity_difference(const ObservedCohort& cohort,
                                                 const GroupKey& underprivileged,
                                                 const GroupKey& privileged,
                                                 const FairRange& range = FairRangeSet{}.spd);

/// DI = PPP_UG / PPP_PG. Undefined when PPP_PG = 0.
FairnessAssessment disparate_impact(const ObservedCohort& cohort,
                                    const GroupKey& underprivileged,
                                    const GroupKey& privileged,
                                    const FairRange& range = FairRangeSet{}.di);

enum class ReferenceStrategy { largest, best_ppp, explicit_group };

const char* reference_strategy_name(ReferenceStrategy strategy);
ReferenceStrategy parse_reference_strategy(const std::string& text);

/// Picks the privileged reference group: largest -> max N_i, best-ppp ->
/// max PPP_i, ties broken by canonical order (first wins). An explicit
/// group is validated against the schema.
GroupKey select_reference_group(const ObservedCohort& cohort,
                                ReferenceStrategy strategy,
                                const std::optional<GroupKey>& explicit_group = std::nullopt);

/// Assesses every non-reference group against the reference on all four
/// metrics. Undefined assessments (missing labels, zero denominators) are
/// included, never dropped. Rows ordered by canonical group, then metric
/// (eod, od, spd, di).
std::vector<FairnessAssessment> pairwise_fairness_sweep(const ObservedCohort& cohort,
                                                        const GroupKey& reference,
                                                        const FairRangeSet& ranges = {});

}  // namespace demobench
