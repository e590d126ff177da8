#include <doctest.h>

#include <cmath>
#include <functional>

#include "demobench/benchmark.hpp"
#include "demobench/cohort.hpp"
#include "demobench/errors.hpp"
#include "demobench/schema.hpp"
#include "test_support.hpp"

using namespace demobench;
using namespace testsupport;

namespace {

errc thrown_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const AuditError& e) {
        return e.code();
    }
    FAIL("expected an AuditError");
    return errc::io_error;
}

}  // namespace

TEST_CASE("schema validation") {
    CHECK_THROWS_AS(AttributeSchema(std::vector<Attribute>{}), AuditError);
    // single attribute with one value: group space of 1
    CHECK(thrown_code([] { AttributeSchema({Attribute{"a", {"x"}}}); }) == errc::invalid_schema);
    CHECK(thrown_code([] { AttributeSchema({Attribute{"a", {"x", "x"}}}); }) ==
          errc::invalid_schema);
    CHECK(thrown_code([] {
              AttributeSchema({Attribute{"a", {"x", "y"}}, Attribute{"a", {"p", "q"}}});
          }) == errc::invalid_schema);
    CHECK(thrown_code([] { AttributeSchema({Attribute{"a", {"x|y", "z"}}}); }) ==
          errc::invalid_schema);
    // alias targeting a value outside the domain
    CHECK(thrown_code([] {
              AttributeSchema({Attribute{"a", {"x", "y"}}}, {{"a", {{"z", "w"}}}});
          }) == errc::invalid_schema);

    AttributeSchema schema({{"race", {"R1", "R2", "R3"}}, {"sex", {"F", "M"}}});
    CHECK(schema.group_space_size() == 6);
    CHECK(schema.group_space().size() == 6);
}

TEST_CASE("group keys are canonical and round-trip through labels") {
    AttributeSchema schema({{"race", {"R1", "R2"}}, {"sex", {"F", "M"}}});
    auto space = schema.group_space();
    // first attribute varies slowest
    CHECK(schema.group_label(space[0]) == "R1|F");
    CHECK(schema.group_label(space[1]) == "R1|M");
    CHECK(schema.group_label(space[2]) == "R2|F");
    CHECK(space[0] < space[1]);
    CHECK(space[1] < space[2]);
    for (const auto& key : space) {
        CHECK(schema.parse_group(schema.group_label(key)) == key);
    }
    CHECK(thrown_code([&] { schema.parse_group("R9|F"); }) == errc::unknown_attribute_value);
}

TEST_CASE("value matching trims whitespace and resolves aliases") {
    AttributeSchema schema({{"sex", {"Female", "Male"}}, {"grp", {"a", "b"}}},
                           {{"sex", {{"F", "Female"}, {"M", "Male"}}}});
    CHECK(schema.key({" F ", "a"}) == schema.key({"Female", "a"}));
    // matching is case-sensitive
    CHECK(thrown_code([&] { schema.key({"female", "a"}); }) == errc::unknown_attribute_value);
}

TEST_CASE("observed_proportions") {
    auto schema = ab_schema();

    SUBCASE("two equal groups") {
        auto cohort = make_cohort(schema, {{"A", 50, 0}, {"B", 50, 0}});
        auto props = observed_proportions(cohort);
        CHECK(props.at(schema.key({"A"})) == 0.5);
        CHECK(props.at(schema.key({"B"})) == 0.5);
    }
    SUBCASE("single present group gets everything") {
        auto cohort = make_cohort(schema, {{"A", 7, 0}});
        auto props = observed_proportions(cohort);
        CHECK(props.at(schema.key({"A"})) == 1.0);
    }
    SUBCASE("empty cohort") {
        auto cohort = make_cohort(schema, {{"A", 0, 0}});
        CHECK(thrown_code([&] { observed_proportions(cohort); }) == errc::empty_cohort);
    }
    SUBCASE("proportions sum to one") {
        auto cohort = make_cohort(schema, {{"A", 13, 0}, {"B", 29, 0}});
        double sum = 0.0;
        for (const auto& [k, v] : observed_proportions(cohort)) sum += v;
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("positive_shares") {
    auto schema = ab_schema();

    SUBCASE("direct arithmetic") {
        auto cohort = make_cohort(schema, {{"A", 100, 10}, {"B", 100, 30}});
        auto shares = positive_shares(cohort);
        CHECK(shares.at(schema.key({"A"})) == 0.25);
        CHECK(shares.at(schema.key({"B"})) == 0.75);
    }
    SUBCASE("all positives in one group") {
        auto cohort = make_cohort(schema, {{"A", 10, 10}, {"B", 10, 0}});
        auto shares = positive_shares(cohort);
        CHECK(shares.at(schema.key({"A"})) == 1.0);
        CHECK(shares.at(schema.key({"B"})) == 0.0);
    }
    SUBCASE("no positives") {
        auto cohort = make_cohort(schema, {{"A", 10, 0}});
        CHECK(thrown_code([&] { positive_shares(cohort); }) == errc::no_positives);
    }
}

TEST_CASE("normalize_benchmark") {
    auto schema = ab_schema();

    SUBCASE("percentages divide through") {
        auto b = make_benchmark(schema, {{"A", 60.0}, {"B", 40.0}});
        CHECK(b.entries.at(schema.key({"A"})) == 0.6);
        CHECK(b.entries.at(schema.key({"B"})) == 0.4);
        CHECK(b.raw.at(schema.key({"A"})) == 60.0);
    }
    SUBCASE("zero mass") {
        std::map<GroupKey, double> raw{{schema.key({"A"}), 0.0}, {schema.key({"B"}), 0.0}};
        CHECK(thrown_code([&] {
                  normalize_benchmark(schema, raw, RawKind::counts, "z", "");
              }) == errc::zero_mass);
    }
    SUBCASE("negative input") {
        std::map<GroupKey, double> raw{{schema.key({"A"}), 5.0}, {schema.key({"B"}), -1.0}};
        CHECK(thrown_code([&] {
                  normalize_benchmark(schema, raw, RawKind::counts, "n", "");
              }) == errc::negative_input);
    }
    SUBCASE("percentage sum band") {
        std::map<GroupKey, double> near{{schema.key({"A"}), 60.0}, {schema.key({"B"}), 40.01}};
        auto b = normalize_benchmark(schema, near, RawKind::percentages, "ok", "");
        CHECK(std::abs(b.total_proportion() - 1.0) <= 1e-12);

        std::map<GroupKey, double> far{{schema.key({"A"}), 60.0}, {schema.key({"B"}), 20.0}};
        CHECK(thrown_code([&] {
                  normalize_benchmark(schema, far, RawKind::percentages, "bad", "");
              }) == errc::count_inconsistency);
    }
    SUBCASE("normalization is idempotent") {
        auto b = make_benchmark(schema, {{"A", 17.0}, {"B", 3.0}});
        auto again = normalize_benchmark(schema, b.entries, RawKind::proportions, b.name, "");
        for (const auto& [key, p] : b.entries) {
            CHECK(std::abs(again.entries.at(key) - p) <= 1e-12);
        }
    }
}

TEST_CASE("NYC population counts normalize to count/sum exactly") {
    auto benchmark = load_benchmark_delimited(read_file(fixture_path("nyc_workforce_2020.csv")),
                                              race_sex_schema(), "nyc", "nyc.csv");
    double total = 0.0;
    for (const auto& [key, count] : benchmark.raw) total += count;
    CHECK(total == 7270608.0);
    for (const auto& [key, count] : benchmark.raw) {
        CHECK(std::abs(benchmark.entries.at(key) - count / total) <= 1e-15);
    }
    CHECK(benchmark.entries.size() == 16);
    CHECK(std::abs(benchmark.total_proportion() - 1.0) <= 1e-9);
}

TEST_CASE("cohort count invariants") {
    auto schema = ab_schema();

    SUBCASE("positives above total") {
        CHECK(thrown_code([&] { make_cohort(schema, {{"A", 3, 5}}); }) ==
              errc::count_inconsistency);
    }
    SUBCASE("confusion counts must sum to the group total") {
        std::map<GroupKey, GroupCounts> groups;
        groups[schema.key({"A"})] = GroupCounts{4, 2, Confusion{1, 1, 1, 2}};  // sums to 5
        CHECK(thrown_code([&] {
                  ObservedCohort("c", Phase::training, schema, groups);
              }) == errc::count_inconsistency);
    }
    SUBCASE("tp+fp must equal positives") {
        std::map<GroupKey, GroupCounts> groups;
        groups[schema.key({"A"})] = GroupCounts{4, 3, Confusion{1, 1, 1, 1}};
        CHECK(thrown_code([&] {
                  ObservedCohort("c", Phase::training, schema, groups);
              }) == errc::count_inconsistency);
    }
    SUBCASE("valid confusion") {
        std::map<GroupKey, GroupCounts> groups;
        groups[schema.key({"A"})] = GroupCounts{4, 2, Confusion{1, 1, 1, 1}};
        ObservedCohort cohort("c", Phase::training, schema, groups);
        CHECK(cohort.total() == 4);
        CHECK(cohort.has_confusion());
    }
}
