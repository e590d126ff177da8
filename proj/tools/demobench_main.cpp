#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "demobench/audit.hpp"
#include "demobench/detail/csv.hpp"
#include "demobench/detail/time.hpp"
#include "demobench/errors.hpp"
#include "demobench/ingest.hpp"
#include "demobench/report.hpp"
#include "demobench/version.hpp"

namespace {

using namespace demobench;

constexpr int kExitOk = 0;
constexpr int kExitAdverse = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(errc::io_error, "cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        fail(errc::io_error, "cannot write '" + out_path + "'");
    }
    out << content;
}

std::string file_label(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

struct BenchmarkRef {
    std::string name;
    std::string version;  // empty = latest
};

BenchmarkRef parse_benchmark_ref(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) return {text, ""};
    return {text.substr(0, colon), text.substr(colon + 1)};
}

std::string resolve_store(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("DEMOBENCH_STORE")) {
        if (*env) return env;
    }
    fail(errc::invalid_config, "no benchmark store given (use --store or set DEMOBENCH_STORE)");
}

// Header-based sniffing: aggregate files carry a 'total' column, record
// files a 'decision' column.
ObservedCohort load_cohort_file(const std::string& path,
                                const std::string& format,
                                const AttributeSchema& schema,
                                Phase phase) {
    std::string content = read_file(path);
    std::string kind = format;
    if (kind == "auto") {
        detail::CsvTable table = detail::parse_csv(content);
        bool has_total = false, has_decision = false;
        for (const auto& h : table.header) {
            if (h == "total") has_total = true;
            if (h == "decision") has_decision = true;
        }
        if (has_total == has_decision) {
            fail(errc::parse_error,
                 "cannot tell whether '" + path +
                     "' is an aggregate table or a record file (use --input-format)");
        }
        kind = has_total ? "aggregate" : "records";
    }
    if (kind == "aggregate") {
        return load_aggregate_audit(content, schema, file_label(path), phase);
    }
    if (kind == "records") {
        RecordLoadResult result = load_records(content, schema, file_label(path), phase);
        if (result.rejected_records > 0) {
            std::cerr << "note: " << result.rejected_records
                      << " record(s) rejected for missing attribute values\n";
        }
        return std::move(result.cohort);
    }
    fail(errc::invalid_config, "unknown input format '" + kind + "'");
}

struct ConfigArgs {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    void add_flag_overrides(CLI::App* cmd) {
        static const std::vector<std::pair<const char*, const char*>> kFlags = {
            {"--tdd-pass", "tdd_pass"},
            {"--tdd-warn", "tdd_warn"},
            {"--alignment", "alignment_policy"},
            {"--reference-strategy", "reference_strategy"},
            {"--reference", "reference_group"},
            {"--ll144-threshold", "ll144_threshold"},
            {"--nddp-normalization", "nddp_normalization"},
        };
        for (const auto& [flag, key] : kFlags) {
            std::string setting = key;
            cmd->add_option_function<std::string>(
                flag,
                [this, setting](const std::string& value) {
                    overrides.emplace_back(setting, value);
                },
                "Overrides the '" + setting + "' setting (precedence: flag > config file > default)");
        }
    }

    AuditConfig assemble() const {
        AuditConfig config;
        if (!config_path.empty()) {
            config = parse_config_file(read_file(config_path));
        }
        for (const auto& [key, value] : overrides) {
            apply_config_setting(config, key, value);
        }
        return config;
    }
};

int run_benchmark_build(const std::string& schema_path,
                        const std::string& input_path,
                        const std::string& format,
                        const std::string& name,
                        const std::string& store_path) {
    AttributeSchema schema = load_schema(read_file(schema_path));
    std::string content = read_file(input_path);
    DemographicBenchmark benchmark =
        load_benchmark(content, parse_benchmark_format(format), schema, name,
                       std::filesystem::path(input_path).filename().string());
    BenchmarkStore store(store_path);
    DemographicBenchmark saved = store.save(benchmark);

    std::size_t width = 5;
    for (const auto& [key, p] : saved.entries) {
        width = std::max(width, saved.schema.group_label(key).size());
    }
    std::cout << "saved benchmark '" << saved.name << "' " << saved.version << " ("
              << saved.entries.size() << " groups) to " << store.dir().string() << "\n";
    std::cout << "group" << std::string(width - 5, ' ') << "  proportion\n";
    for (const auto& [key, p] : saved.entries) {
        std::string label = saved.schema.group_label(key);
        std::cout << label << std::string(width - label.size(), ' ') << "  "
                  << format_fixed(p, 4) << "\n";
    }
    return kExitOk;
}

int run_benchmark_list(const std::string& store_path, const std::string& name) {
    BenchmarkStore store(store_path);
    auto entries = store.list(name);
    for (const auto& entry : entries) {
        std::cout << entry.name << " " << entry.version << " " << entry.path.string() << "\n";
    }
    if (entries.empty()) {
        std::cout << "(store is empty)\n";
    }
    return kExitOk;
}

int run_audit(const std::string& benchmark_ref_text,
              const std::string& cohort_path,
              const std::string& phase_text,
              const std::string& training_path,
              bool require_positives,
              bool ll144,
              const ConfigArgs& config_args,
              const std::string& input_format,
              const std::string& store_path,
              const std::string& out_path,
              const std::string& render_mode) {
    AuditConfig config = config_args.assemble();
    config.ll144_enabled = ll144;

    BenchmarkStore store(store_path);
    BenchmarkRef ref = parse_benchmark_ref(benchmark_ref_text);
    DemographicBenchmark benchmark = store.load(ref.name, ref.version);

    Phase phase = parse_phase(phase_text);
    ObservedCohort cohort = load_cohort_file(cohort_path, input_format, benchmark.schema, phase);
    if (require_positives && cohort.total_positive() == 0) {
        fail(errc::no_positives,
             "--positives given but cohort '" + cohort.label() + "' has no positive decisions");
    }

    std::optional<ObservedCohort> training;
    if (!training_path.empty()) {
        training = load_cohort_file(training_path, input_format, benchmark.schema, Phase::training);
    }

    AuditReport report;
    report.tool_version = kToolVersion;
    report.timestamp = detail::now_iso8601();
    report.benchmark_name = benchmark.name;
    report.benchmark_version = benchmark.version;
    report.benchmark_digest = benchmark_digest(benchmark);
    report.cohorts.push_back(describe_cohort(cohort));
    if (training) report.cohorts.push_back(describe_cohort(*training));
    report.config_echo = echo_config(config);

    report.disparity.push_back(
        build_disparity_report(benchmark, cohort, config.policy, config.nddp));

    if (phase == Phase::training) {
        report.findings.push_back(sampling_bias_audit(cohort, benchmark, config));
    } else {
        report.findings.push_back(deployment_bias_audit(cohort, benchmark, training, config));
    }
    if (cohort.total_positive() > 0) {
        report.findings.push_back(structural_bias_audit(cohort, benchmark, config));
    }

    // Fairness sweeps see the LL144-filtered cohort; disparity above is
    // always computed on the full cohort.
    ObservedCohort sweep_cohort = cohort;
    if (ll144) {
        Ll144Result filtered = apply_ll144_exclusion(cohort, config.ll144_threshold);
        ExclusionEcho echo;
        echo.threshold = filtered.threshold;
        for (const auto& key : filtered.excluded) {
            echo.excluded.push_back(cohort.schema().group_label(key));
        }
        echo.retained = filtered.filtered.groups().size();
        report.exclusions = std::move(echo);
        sweep_cohort = std::move(filtered.filtered);
    }
    if (!sweep_cohort.groups().empty() && sweep_cohort.total() > 0) {
        std::optional<GroupKey> explicit_group;
        if (config.reference_strategy == ReferenceStrategy::explicit_group) {
            if (!config.reference_group) {
                fail(errc::invalid_config, "explicit reference strategy needs --reference");
            }
            explicit_group = sweep_cohort.schema().parse_group(*config.reference_group);
        }
        GroupKey reference =
            select_reference_group(sweep_cohort, config.reference_strategy, explicit_group);
        auto assessments = pairwise_fairness_sweep(sweep_cohort, reference, config.fair_ranges);
        report.fairness = render_fairness_block(sweep_cohort.schema(), reference,
                                                config.reference_strategy, assessments);
    }

    write_output(render_report(report, parse_render_mode(render_mode)), out_path);
    return any_adverse_finding(report) ? kExitAdverse : kExitOk;
}

int run_monitor(const std::string& benchmark_ref_text,
                const std::vector<std::string>& window_paths,
                double threshold,
                bool threshold_given,
                const ConfigArgs& config_args,
                const std::string& store_path,
                const std::string& out_path,
                const std::string& render_mode) {
    AuditConfig config = config_args.assemble();
    if (threshold_given) {
        config.drift.benchmark_tdd = threshold;
        config.drift.step_tdd = threshold;
    }

    BenchmarkStore store(store_path);
    BenchmarkRef ref = parse_benchmark_ref(benchmark_ref_text);
    DemographicBenchmark benchmark = store.load(ref.name, ref.version);

    std::vector<ObservedCohort> windows;
    for (const auto& path : window_paths) {
        windows.push_back(load_aggregate_audit(read_file(path), benchmark.schema,
                                               file_label(path), Phase::production));
    }
    DriftSeries series = drift_monitor(windows, benchmark, config.drift, config);
    write_output(render_drift_report(series, parse_render_mode(render_mode)), out_path);
    return series.crossings.empty() ? kExitOk : kExitAdverse;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"demobench - demographic benchmarking audit toolkit"};
    app.set_version_flag("--version", demobench::kToolVersion);
    app.require_subcommand(1);

    std::string store_flag;

    // benchmark build/list
    auto* benchmark_cmd = app.add_subcommand("benchmark", "Manage reference-population benchmarks");
    benchmark_cmd->require_subcommand(1);

    auto* build_cmd = benchmark_cmd->add_subcommand("build", "Build and store a versioned benchmark");
    std::string schema_path, input_path, format = "delimited", bench_name;
    build_cmd->add_option("--schema", schema_path, "Schema JSON file")->required();
    build_cmd->add_option("--input", input_path, "Benchmark table (delimited or structured)")->required();
    build_cmd->add_option("--format", format, "Input format: delimited|structured (default delimited)");
    build_cmd->add_option("--name", bench_name, "Benchmark name")->required();
    build_cmd->add_option("--out,--store", store_flag,
                          "Benchmark store directory (default: $DEMOBENCH_STORE)");

    auto* list_cmd = benchmark_cmd->add_subcommand("list", "List stored benchmark versions");
    std::string list_name;
    list_cmd->add_option("--store", store_flag, "Benchmark store directory (default: $DEMOBENCH_STORE)");
    list_cmd->add_option("--name", list_name, "Only list versions of this benchmark");

    // audit run
    auto* audit_cmd = app.add_subcommand("audit", "Audit a cohort against a benchmark");
    audit_cmd->require_subcommand(1);
    auto* run_cmd = audit_cmd->add_subcommand("run", "Run the stage-appropriate audits");
    std::string bench_ref, cohort_path, phase_text, training_path;
    std::string input_format = "auto", out_path, render_mode = "structured";
    bool flag_positives = false, flag_ll144 = false;
    ConfigArgs audit_config;
    run_cmd->add_option("--benchmark", bench_ref, "Benchmark name[:version] (latest by default)")->required();
    run_cmd->add_option("--cohort", cohort_path, "Cohort file (aggregate table or decision records)")->required();
    run_cmd->add_option("--phase", phase_text, "Cohort phase: training|production")->required();
    run_cmd->add_option("--training-cohort", training_path,
                        "Training cohort for the supplementary production-vs-training diagnostic");
    run_cmd->add_flag("--positives", flag_positives,
                      "Require positive decisions (error when the cohort has none)");
    run_cmd->add_flag("--ll144", flag_ll144,
                      "Exclude groups below the small-group threshold from fairness sweeps "
                      "(disparity output keeps all groups)");
    run_cmd->add_option("--config", audit_config.config_path, "Flat key=value configuration file");
    run_cmd->add_option("--input-format", input_format, "Cohort file kind: auto|aggregate|records");
    run_cmd->add_option("--store", store_flag, "Benchmark store directory (default: $DEMOBENCH_STORE)");
    run_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
    run_cmd->add_option("--render", render_mode, "Report mode: structured|human (default structured)");
    audit_config.add_flag_overrides(run_cmd);

    // monitor
    auto* monitor_cmd = app.add_subcommand("monitor", "Track drift across production windows");
    std::string monitor_bench_ref, monitor_out, monitor_render = "structured";
    std::vector<std::string> window_paths;
    double threshold = 0.15;
    ConfigArgs monitor_config;
    monitor_cmd->add_option("--benchmark", monitor_bench_ref, "Benchmark name[:version]")->required();
    monitor_cmd->add_option("--windows", window_paths,
                            "Aggregate window files in time order (each needs '# window:' bounds)")
        ->required()
        ->expected(-1);
    auto* threshold_opt =
        monitor_cmd->add_option("--threshold", threshold, "TDD crossing threshold (benchmark and step)");
    monitor_cmd->add_option("--config", monitor_config.config_path, "Flat key=value configuration file");
    monitor_cmd->add_option("--store", store_flag, "Benchmark store directory (default: $DEMOBENCH_STORE)");
    monitor_cmd->add_option("--out", monitor_out, "Write the report here instead of stdout");
    monitor_cmd->add_option("--render", monitor_render, "Report mode: structured|human");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;  // exit codes are exactly {0,1,2}
    }

    try {
        if (build_cmd->parsed()) {
            return run_benchmark_build(schema_path, input_path, format, bench_name,
                                       resolve_store(store_flag));
        }
        if (list_cmd->parsed()) {
            return run_benchmark_list(resolve_store(store_flag), list_name);
        }
        if (run_cmd->parsed()) {
            return run_audit(bench_ref, cohort_path, phase_text, training_path, flag_positives,
                             flag_ll144, audit_config, input_format, resolve_store(store_flag),
                             out_path, render_mode);
        }
        if (monitor_cmd->parsed()) {
            return run_monitor(monitor_bench_ref, window_paths, threshold,
                               threshold_opt->count() > 0, monitor_config,
                               resolve_store(store_flag), monitor_out, monitor_render);
        }
    } catch (const demobench::AuditError& e) {
        std::cerr << "error: " << e.what() << " [" << demobench::errc_name(e.code()) << "]\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
