#include "demobench/fairness.hpp"

#include "demobench/errors.hpp"

namespace demobench {

FairRange make_fair_range(std::string metric, double lower, double upper, double ideal) {
    if (!(lower <= ideal && ideal <= upper)) {
        fail(errc::invalid_config,
             "fair range for '" + metric + "' must satisfy lower <= ideal <= upper");
    }
    return FairRange{std::move(metric), lower, upper, ideal};
}

FairRange& FairRangeSet::by_id(const std::string& metric) {
    if (metric == "eod") return eod;
    if (metric == "od") return od;
    if (metric == "spd") return spd;
    if (metric == "di") return di;
    fail(errc::invalid_config, "unknown fairness metric '" + metric + "'");
}

const FairRange& FairRangeSet::by_id(const std::string& metric) const {
    return const_cast<FairRangeSet*>(this)->by_id(metric);
}

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::fair: return "Fair";
        case Verdict::unfair: return "Unfair";
        case Verdict::undefined: return "Undefined";
    }
    return "?";
}

Verdict classify(double value, const FairRange& range) {
    // endpoints are fair: "between" is read inclusively to avoid knife-edge flapping
    return (value >= range.lower && value <= range.upper) ? Verdict::fair : Verdict::unfair;
}

GroupRates group_rates(const ObservedCohort& cohort, const GroupKey& group) {
    if (!cohort.schema().contains(group)) {
        fail(errc::unknown_group, "group key does not belong to the cohort's schema");
    }
    if (cohort.total() == 0) {
        fail(errc::empty_cohort, "cohort '" + cohort.label() + "' has no people");
    }
    GroupRates rates;
    rates.group = group;
    auto it = cohort.groups().find(group);
    if (it != cohort.groups().end()) {
        rates.total = it->second.total;
        rates.positive = it->second.positive;
        rates.confusion = it->second.confusion;
    }
    rates.ppp = static_cast<double>(rates.positive) / static_cast<double>(cohort.total());
    if (!rates.confusion) {
        rates.tpr_note = "missing labels";
        rates.fpr_note = "missing labels";
        return rates;
    }
    const Confusion& c = *rates.confusion;
    if (c.tp + c.fn > 0) {
        rates.tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    } else {
        rates.tpr_note = "zero denominator (tp+fn = 0)";
    }
    if (c.fp + c.tn > 0) {
        rates.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
    } else {
        rates.fpr_note = "zero denominator (fp+tn = 0)";
    }
    return rates;
}

namespace {

FairnessAssessment assess(std::string metric,
                          std::optional<double> value,
                          const FairRange& range,
                          const GroupKey& ug,
                          const GroupKey& pg,
                          std::string note = {}) {
    FairnessAssessment a;
    a.metric = std::move(metric);
    a.value = value;
    a.range = range;
    a.verdict = value ? classify(*value, range) : Verdict::undefined;
    a.underprivileged = ug;
    a.privileged = pg;
    a.note = std::move(note);
    return a;
}

std::string join_notes(const std::string& side_a, const std::string& note_a,
                       const std::string& side_b, const std::string& note_b) {
    std::string out;
    if (!note_a.empty()) out += side_a + ": " + note_a;
    if (!note_b.empty()) {
        if (!out.empty()) out += "; ";
        out += side_b + ": " + note_b;
    }
    return out;
}

}  // namespace

FairnessAssessment equal_opportunity_difference(const ObservedCohort& cohort,
                                                const GroupKey& ug,
                                                const GroupKey& pg,
                                                const FairRange& range) {
    GroupRates u = group_rates(cohort, ug);
    GroupRates p = group_rates(cohort, pg);
    if (!u.tpr || !p.tpr) {
        return assess("eod", std::nullopt, range, ug, pg,
                      join_notes("underprivileged", u.tpr_note, "privileged", p.tpr_note));
    }
    return assess("eod", *u.tpr - *p.tpr, range, ug, pg);
}

FairnessAssessment odds_difference(const ObservedCohort& cohort,
                                   const GroupKey& ug,
                                   const GroupKey& pg,
                                   const FairRange& range) {
    GroupRates u = group_rates(cohort, ug);
    GroupRates p = group_rates(cohort, pg);
    if (!u.tpr || !p.tpr || !u.fpr || !p.fpr) {
        std::string note = join_notes("underprivileged", !u.tpr ? u.tpr_note : u.fpr_note,
                                      "privileged", !p.tpr ? p.tpr_note : p.fpr_note);
        return assess("od", std::nullopt, range, ug, pg, note);
    }
    return assess("od", (*u.fpr - *p.fpr) + (*u.tpr - *p.tpr), range, ug, pg);
}

FairnessAssessment statistical_parity_difference(const ObservedCohort& cohort,
                                                 const GroupKey& ug,
                                                 const GroupKey& pg,
                                                 const FairRange& range) {
    GroupRates u = group_rates(cohort, ug);
    GroupRates p = group_rates(cohort, pg);
    return assess("spd", u.ppp - p.ppp, range, ug, pg);
}

FairnessAssessment disparate_impact(const ObservedCohort& cohort,
                                    const GroupKey& ug,
                                    const GroupKey& pg,
                                    const FairRange& range) {
    GroupRates u = group_rates(cohort, ug);
    GroupRates p = group_rates(cohort, pg);
    if (p.ppp == 0.0) {
        return assess("di", std::nullopt, range, ug, pg, "privileged: PPP is zero");
    }
    return assess("di", u.ppp / p.ppp, range, ug, pg);
}

const char* reference_strategy_name(ReferenceStrategy strategy) {
    switch (strategy) {
        case ReferenceStrategy::largest: return "largest";
        case ReferenceStrategy::best_ppp: return "best-ppp";
        case ReferenceStrategy::explicit_group: return "explicit";
    }
    return "?";
}

ReferenceStrategy parse_reference_strategy(const std::string& text) {
    if (text == "largest") return ReferenceStrategy::largest;
    if (text == "best-ppp") return ReferenceStrategy::best_ppp;
    if (text == "explicit") return ReferenceStrategy::explicit_group;
    fail(errc::invalid_config, "unknown reference strategy '" + text + "'");
}

GroupKey select_reference_group(const ObservedCohort& cohort,
                                ReferenceStrategy strategy,
                                const std::optional<GroupKey>& explicit_group) {
    if (cohort.groups().empty() || cohort.total() == 0) {
        fail(errc::empty_cohort, "cohort '" + cohort.label() + "' has no people");
    }
    if (strategy == ReferenceStrategy::explicit_group) {
        if (!explicit_group) {
            fail(errc::invalid_config, "explicit reference strategy needs a group");
        }
        if (!cohort.schema().contains(*explicit_group)) {
            fail(errc::unknown_group, "explicit reference group is outside the schema");
        }
        return *explicit_group;
    }
    // std::map iterates in canonical order, so with strict > the first of any
    // tie wins
    const GroupKey* best = nullptr;
    double best_score = -1.0;
    for (const auto& [key, counts] : cohort.groups()) {
        double score = strategy == ReferenceStrategy::largest
                           ? static_cast<double>(counts.total)
                           : static_cast<double>(counts.positive) /
                                 static_cast<double>(cohort.total());
        if (score > best_score) {
            best_score = score;
            best = &key;
        }
    }
    return *best;
}

std::vector<FairnessAssessment> pairwise_fairness_sweep(const ObservedCohort& cohort,
                                                        const GroupKey& reference,
                                                        const FairRangeSet& ranges) {
    std::vector<FairnessAssessment> rows;
    for (const auto& [key, counts] : cohort.groups()) {
        if (key == reference) continue;  // no self-comparison
        rows.push_back(equal_opportunity_difference(cohort, key, reference, ranges.eod));
        rows.push_back(odds_difference(cohort, key, reference, ranges.od));
        rows.push_back(statistical_parity_difference(cohort, key, reference, ranges.spd));
        rows.push_back(disparate_impact(cohort, key, reference, ranges.di));
    }
    return rows;
}

}  // namespace demobench
