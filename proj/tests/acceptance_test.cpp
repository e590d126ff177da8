// Acceptance suite: one pass/fail line per criterion, exit code = failures.
//
// Expected values marked "frozen oracle" were computed with an independent
// spreadsheet-style recomputation over the fixture tables before the library
// was built, then pinned here. Criteria that recompute an oracle at runtime
// do so with their own arithmetic over the fixture files, never through the
// library code path they check.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "demobench/audit.hpp"
#include "demobench/disparity.hpp"
#include "demobench/fairness.hpp"
#include "demobench/ingest.hpp"
#include "demobench/report.hpp"

namespace fs = std::filesystem;
using namespace demobench;
using ordered_json = nlohmann::ordered_json;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail = "") {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " C" << id << ": " << name;
    if (!pass && !detail.empty()) std::cout << "\n       " << detail;
    std::cout << "\n";
    if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fixture(const std::string& name) {
    return std::string(DEMOBENCH_FIXTURE_DIR) + "/" + name;
}

// Independent numeric-column reader for oracle recomputations: skips '#'
// comments and the header, returns the trailing numeric columns per row.
std::vector<std::vector<double>> numeric_columns(const std::string& path, int count) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        std::vector<double> values;
        for (std::size_t i = fields.size() - count; i < fields.size(); ++i) {
            values.push_back(std::stod(fields[i]));
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

// Table rows in code order 1..16 (canonical schema order matches).
const double kNycPublishedPct[16] = {0.11, 0.10, 8.45,  7.47,  11.24, 8.92, 14.48, 12.73,
                                     0.02, 0.02, 0.65,  0.60,  1.76,  1.43, 16.51, 15.51};
const double kUsaPct[16] = {0.31, 0.30, 3.77,  3.32,  6.97, 5.97, 10.45, 10.03,
                            0.11, 0.11, 0.25,  0.25,  1.85, 1.64, 28.11, 26.56};
const double kAdpPct[16] = {0.2,  0.13, 5.6,  7.16, 15.84, 9.10, 9.08, 8.30,
                            0.12, 0.10, 0.0,  0.0,  2.24,  1.44, 20.99, 19.71};
const double kRippleMatchPct[16] = {0.21, 0.44, 24.82, 36.16, 3.22, 6.19, 1.82, 4.73,
                                    0.03, 0.09, 0.0,   0.0,   5.19, 2.31, 5.23, 9.55};
const double kSheppardMullinPct[16] = {0.07, 0.07, 11.23, 6.75, 5.70, 2.89, 6.31, 5.20,
                                       0.02, 0.04, 0.0,   0.0,  2.79, 2.05, 28.18, 28.69};

DemographicBenchmark load_usa() {
    return load_benchmark_delimited(slurp(fixture("usa_workforce_2020.csv")),
                                    load_schema(slurp(fixture("race_sex_schema.json"))),
                                    "usa_workforce_2020", "usa_workforce_2020.csv");
}

ObservedCohort load_fixture_cohort(const std::string& file) {
    return load_aggregate_audit(slurp(fixture(file)),
                                load_schema(slurp(fixture("race_sex_schema.json"))),
                                file.substr(0, file.find('.')), Phase::production);
}

// --- criterion 1: Table-derived NYC percentages ------------------------------
void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    auto schema = load_schema(slurp(fixture("race_sex_schema.json")));
    auto benchmark = load_benchmark_delimited(slurp(fixture("nyc_workforce_2020.csv")), schema,
                                              "nyc_workforce_2020", "nyc_workforce_2020.csv");
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream detail;
    bool all_within = benchmark.entries.size() == 16;
    std::size_t i = 0;
    for (const auto& [key, p] : benchmark.entries) {
        double recomputed = p * 100.0;
        double delta = std::abs(recomputed - kNycPublishedPct[i]);
        if (delta > 0.01 + 1e-12) {
            all_within = false;
            detail << "group " << (i + 1) << ": recomputed " << recomputed << " vs published "
                   << kNycPublishedPct[i] << " (|delta| " << delta << " pp); ";
        }
        ++i;
    }
    bool fast = elapsed < 1.0;
    if (!fast) detail << "runtime " << elapsed << "s; ";
    report(1, all_within && fast,
           "NYC benchmark reproduces the published percentage column within 0.01 pp",
           detail.str() + "(the published column is not consistent with the published counts "
                          "beyond rounding; see the count/sum cross-check in the unit suite)");
}

// --- criterion 2: per-group DD equals direct column subtraction --------------
void criterion_2() {
    auto benchmark = load_usa();
    struct Case {
        const char* file;
        const double* pct;
    };
    const Case cases[] = {{"adp_2023.csv", kAdpPct},
                          {"ripplematch_2023.csv", kRippleMatchPct},
                          {"sheppardmullin_2023.csv", kSheppardMullinPct}};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : cases) {
        auto cohort = load_fixture_cohort(c.file);
        auto disparity =
            build_disparity_report(benchmark, cohort, AlignmentPolicy::union_zero_fill);
        if (disparity.rows.size() != 16) {
            ok = false;
            detail << c.file << ": expected 16 rows; ";
            continue;
        }
        for (std::size_t i = 0; i < 16; ++i) {
            double expected = (kUsaPct[i] - c.pct[i]) / 100.0;  // direct column subtraction
            if (std::abs(disparity.rows[i].dd - expected) > 1e-4) {
                ok = false;
                detail << c.file << " row " << (i + 1) << ": dd " << disparity.rows[i].dd
                       << " vs " << expected << "; ";
            }
        }
    }
    report(2, ok, "per-group DD matches direct Table-column subtraction within 1e-4",
           detail.str());
}

// --- criterion 3: TDD against the brute-force oracle --------------------------
void criterion_3() {
    auto benchmark = load_usa();
    auto cohort = load_fixture_cohort("adp_2023.csv");
    double tdd = total_demographic_disparity(
        align_groups(benchmark, cohort, AlignmentPolicy::union_zero_fill));

    // frozen oracle value, computed before the build from the fixture columns
    const double kFrozen = 0.36131988801119885;

    // runtime brute-force recomputation, independent arithmetic over the files
    auto usa_rows = numeric_columns(fixture("usa_workforce_2020.csv"), 1);
    auto adp_rows = numeric_columns(fixture("adp_2023.csv"), 2);
    double usa_sum = 0.0, adp_sum = 0.0;
    for (const auto& r : usa_rows) usa_sum += r[0];
    for (const auto& r : adp_rows) adp_sum += r[0];
    double brute = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        brute += std::abs(usa_rows[i][0] / usa_sum - adp_rows[i][0] / adp_sum);
    }

    bool ok = std::abs(tdd - kFrozen) <= 1e-6 * kFrozen &&
              std::abs(tdd - brute) <= 1e-6 * brute &&
              std::abs(tdd - 0.3613) <= 5e-4;
    std::ostringstream detail;
    detail << "tdd=" << tdd << " frozen=" << kFrozen << " brute=" << brute;
    report(3, ok, "USA-vs-ADP TDD matches the brute-force oracle (~0.3613) to 1e-6 relative",
           detail.str());
}

// --- criterion 4: the 2% rule excludes exactly the published small groups ----
void criterion_4() {
    auto cohort = load_fixture_cohort("adp_2023.csv");
    auto result = apply_ll144_exclusion(cohort, 0.02);

    // codes 1, 2, 9, 10, 11, 12, 14 (1-based row order)
    const std::vector<std::size_t> expected = {1, 2, 9, 10, 11, 12, 14};
    auto space = cohort.schema().group_space();
    std::vector<std::size_t> excluded;
    for (const auto& key : result.excluded) {
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (space[i] == key) excluded.push_back(i + 1);
        }
    }
    bool exclusions_ok = excluded == expected;

    auto disparity = build_disparity_report(load_usa(), cohort, AlignmentPolicy::union_zero_fill);
    bool disparity_ok = disparity.rows.size() == 16;

    // excluded groups never appear in the fairness sweep
    auto reference = select_reference_group(result.filtered, ReferenceStrategy::largest);
    auto sweep = pairwise_fairness_sweep(result.filtered, reference);
    bool sweep_ok = sweep.size() == (9 - 1) * 4;
    for (const auto& row : sweep) {
        for (const auto& key : result.excluded) {
            if (row.underprivileged == key || row.privileged == key) sweep_ok = false;
        }
    }
    std::ostringstream detail;
    detail << "excluded codes:";
    for (auto i : excluded) detail << " " << i;
    detail << "; disparity rows: " << disparity.rows.size() << "; sweep rows: " << sweep.size();
    report(4, exclusions_ok && disparity_ok && sweep_ok,
           "2% rule excludes exactly codes 1,2,9,10,11,12,14 while disparity keeps all 16",
           detail.str());
}

// --- criterion 5: fair-range verdicts at the grid points ----------------------
void criterion_5() {
    FairRangeSet ranges;
    const double diff_grid[5] = {-0.15, -0.1, 0.0, 0.1, 0.15};
    const double di_grid[5] = {0.7, 0.8, 1.0, 1.2, 1.3};
    const Verdict expected[5] = {Verdict::unfair, Verdict::fair, Verdict::fair, Verdict::fair,
                                 Verdict::unfair};
    bool ok = true;
    std::ostringstream detail;
    for (int i = 0; i < 5; ++i) {
        for (const char* metric : {"eod", "od", "spd"}) {
            Verdict v = classify(diff_grid[i], ranges.by_id(metric));
            if (v != expected[i]) {
                ok = false;
                detail << metric << "(" << diff_grid[i] << ")=" << verdict_name(v) << "; ";
            }
        }
        Verdict v = classify(di_grid[i], ranges.di);
        if (v != expected[i]) {
            ok = false;
            detail << "di(" << di_grid[i] << ")=" << verdict_name(v) << "; ";
        }
    }
    report(5, ok, "fair-range verdicts are Unfair/Fair/Fair/Fair/Unfair across both grids",
           detail.str());
}

// --- criterion 6: property suites ---------------------------------------------
void criterion_6() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xACCE97);
    bool ok = true;
    std::ostringstream detail;

    auto fail_once = [&](const std::string& what) {
        if (ok) detail << what;
        ok = false;
    };

    std::uniform_int_distribution<std::size_t> size_dist(2, 16);
    for (int iter = 0; iter < 1000 && ok; ++iter) {
        std::size_t n = size_dist(rng);
        std::vector<std::string> values;
        for (std::size_t i = 0; i < n; ++i) values.push_back("g" + std::to_string(i));
        AttributeSchema schema({Attribute{"group", values}});

        auto random_dist = [&](bool allow_zero) {
            std::uniform_real_distribution<double> unit(allow_zero ? 0.0 : 0.01, 1.0);
            std::vector<double> v(n);
            double sum = 0.0;
            for (double& x : v) sum += (x = unit(rng));
            for (double& x : v) x /= sum;
            return v;
        };
        auto P = random_dist(false);
        auto R = random_dist(true);
        AlignedDistributions aligned{schema, schema.group_space(), P, R, std::nullopt, {}};

        double dd_sum = 0.0;
        for (const auto& [key, v] : demographic_disparity(aligned)) dd_sum += v;
        if (std::abs(dd_sum) > 1e-9) fail_once("sum(DD) != 0");

        double tdd = total_demographic_disparity(aligned);
        if (tdd < 0.0 || tdd > 2.0) fail_once("TDD out of [0,2]");

        AlignedDistributions swapped{schema, schema.group_space(), R, P, std::nullopt, {}};
        if (total_demographic_disparity(swapped) != tdd) fail_once("TDD not antisymmetric");
        auto dd = demographic_disparity(aligned);
        for (const auto& [key, v] : demographic_disparity(swapped)) {
            if (v != -dd.at(key)) fail_once("DD not antisymmetric");
        }

        auto P_rev = P;
        auto R_rev = R;
        std::reverse(P_rev.begin(), P_rev.end());
        std::reverse(R_rev.begin(), R_rev.end());
        AlignedDistributions reversed{schema, schema.group_space(), P_rev, R_rev, std::nullopt, {}};
        if (std::abs(total_demographic_disparity(reversed) - tdd) > 1e-12) {
            fail_once("TDD not permutation-invariant");
        }
    }

    // SPD = PPP_PG * (DI - 1) on random count cohorts
    AttributeSchema ab({Attribute{"group", {"A", "B"}}});
    std::uniform_int_distribution<std::int64_t> total_dist(1, 400);
    for (int iter = 0; iter < 1000 && ok; ++iter) {
        std::int64_t na = total_dist(rng), nb = total_dist(rng);
        std::uniform_int_distribution<std::int64_t> pa(0, na), pb(1, nb);
        std::map<GroupKey, GroupCounts> groups{
            {ab.key({"A"}), {na, pa(rng), std::nullopt}},
            {ab.key({"B"}), {nb, pb(rng), std::nullopt}}};
        ObservedCohort cohort("c", Phase::production, ab, groups);
        auto spd = statistical_parity_difference(cohort, ab.key({"A"}), ab.key({"B"}));
        auto di = disparate_impact(cohort, ab.key({"A"}), ab.key({"B"}));
        double ppp_pg = group_rates(cohort, ab.key({"B"})).ppp;
        if (std::abs(*spd.value - ppp_pg * (*di.value - 1.0)) > 1e-12) {
            fail_once("SPD != PPP_PG*(DI-1)");
        }
    }

    // count-based and record-based computations agree exactly
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> rec_count(10, 200);
    for (int iter = 0; iter < 50 && ok; ++iter) {
        std::string records = "group,decision,label\n";
        std::int64_t tall[2][4] = {};
        int n = rec_count(rng);
        for (int i = 0; i < n; ++i) {
            int g = bit(rng), d = bit(rng), y = bit(rng);
            records += "g" + std::to_string(g) + "," + std::to_string(d) + "," +
                       std::to_string(y) + "\n";
            tall[g][d * 2 + y]++;
        }
        AttributeSchema g01({Attribute{"group", {"g0", "g1"}}});
        auto from_records = load_records(records, g01, "r", Phase::training).cohort;
        std::map<GroupKey, GroupCounts> counted;
        for (int g = 0; g < 2; ++g) {
            Confusion c{tall[g][3], tall[g][2], tall[g][1], tall[g][0]};  // tp fp fn tn
            std::int64_t total = c.tp + c.fp + c.fn + c.tn;
            if (total == 0) continue;
            counted[g01.key({std::string("g") + char('0' + g)})] =
                GroupCounts{total, c.tp + c.fp, c};
        }
        ObservedCohort from_counts("c", Phase::training, g01, counted);
        if (from_records.total() != from_counts.total()) fail_once("record/count totals differ");
        auto pr = observed_proportions(from_records);
        auto pc = observed_proportions(from_counts);
        for (const auto& [key, v] : pr) {
            if (pc.at(key) != v) fail_once("record/count proportions differ");
        }
    }

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= 30.0) {
        ok = false;
        detail << " runtime " << elapsed << "s";
    }
    report(6, ok, "property suites hold over 1000+ random distribution pairs", detail.str());
}

// --- criterion 7: workflow determinism through the CLI ------------------------
void criterion_7() {
    fs::path work = fs::temp_directory_path() / "demobench-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    fs::path store = work / "store";
    fs::path log = work / "log.txt";

    auto run = [&](const std::string& args) {
        std::string cmd =
            std::string(DEMOBENCH_CLI_PATH) + " " + args + " >> " + log.string() + " 2>&1";
        int status = std::system(cmd.c_str());
        return status == -1 ? -1 : WEXITSTATUS(status);
    };

    int rc_build = run("benchmark build --schema " + fixture("race_sex_schema.json") +
                       " --input " + fixture("usa_workforce_2020.csv") +
                       " --name usa_workforce_2020 --out " + store.string());
    std::string audit_args = "audit run --benchmark usa_workforce_2020 --cohort " +
                             fixture("adp_2023.csv") + " --phase production --ll144 --store " +
                             store.string();
    int rc1 = run(audit_args + " --out " + (work / "r1.json").string());
    int rc2 = run(audit_args + " --out " + (work / "r2.json").string());

    bool ok = rc_build == 0 && rc1 == 1 && rc2 == 1;
    std::ostringstream detail;
    if (!ok) detail << "exit codes: build=" << rc_build << " run1=" << rc1 << " run2=" << rc2;
    if (ok) {
        ordered_json a = ordered_json::parse(slurp((work / "r1.json").string()));
        ordered_json b = ordered_json::parse(slurp((work / "r2.json").string()));
        bool digest_equal = a["digest"] == b["digest"];
        a["timestamp"] = "";
        b["timestamp"] = "";
        bool bytes_equal = a.dump() == b.dump();
        ok = digest_equal && bytes_equal;
        if (!ok) detail << "digest_equal=" << digest_equal << " bytes_equal=" << bytes_equal;
    }
    report(7, ok, "repeated `audit run` produces byte-identical reports modulo timestamp",
           detail.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    std::cout << "acceptance: " << (7 - g_failures) << "/7 criteria passed\n";
    return g_failures == 0 ? 0 : 1;
}
