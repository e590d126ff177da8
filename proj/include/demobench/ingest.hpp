#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "demobench/benchmark.hpp"
#include "demobench/cohort.hpp"

namespace demobench {

enum class BenchmarkFormat { delimited_table, structured_object };

BenchmarkFormat parse_benchmark_format(const std::string& text);

/// Schema file: a JSON object {attributes: [{name, values}], aliases?:
/// {attr: {from: to}}}.
AttributeSchema load_schema(const std::string& content);

/// Delimited benchmark table: header `attr1,...,attrK,count` or
/// `attr1,...,attrK,percent` (columns matching the schema's attribute names,
/// any order for the attribute columns). Returns a normalized benchmark with
/// source name and content digest recorded in provenance.
DemographicBenchmark load_benchmark_delimited(const std::string& content,
                                              const AttributeSchema& schema,
                                              const std::string& name,
                                              const std::string& source_name);

/// Structured-object benchmark: a single JSON object {name, version, schema,
/// entries: [{values, proportion}], provenance}. The embedded schema is
/// authoritative; when `expected_schema` is given it must match.
DemographicBenchmark load_benchmark_structured(const std::string& content,
                                               const std::optional<AttributeSchema>& expected_schema,
                                               const std::string& source_name);

DemographicBenchmark load_benchmark(const std::string& content,
                                    BenchmarkFormat format,
                                    const std::optional<AttributeSchema>& schema,
                                    const std::string& name,
                                    const std::string& source_name);

/// Serializes a benchmark to its structured-object form (deterministic;
/// load(save(b)) reproduces every proportion bit-for-bit).
std::string save_benchmark_content(const DemographicBenchmark& benchmark);

struct RecordLoadResult {
    ObservedCohort cohort;
    std::int64_t rejected_records = 0;
};

/// Record-level decision data: header `attr1,...,attrK,decision[,label][,timestamp]`,
/// decision/label in {0,1}, timestamp ISO-8601. Aggregates into per-group
/// counts; confusion cells are tallied when a label column is present
/// (all-or-nothing per file — partial labelling is MixedLabels). Records with
/// missing attribute values are rejected and counted, not imputed.
RecordLoadResult load_records(const std::string& content,
                              const AttributeSchema& schema,
                              const std::string& label,
                              Phase phase);

/// Aggregate audit table: header `attr1,...,attrK,total,positive[,tp,fp,fn,tn]`.
/// Validates positive <= total and confusion-sum consistency per row.
ObservedCohort load_aggregate_audit(const std::string& content,
                                    const AttributeSchema& schema,
                                    const std::string& label,
                                    Phase phase);

/// Append-only directory of versioned benchmark files, one JSON file per
/// version, named `<name>-v<NNNN>.json`. Writes are single-writer; reads may
/// proceed concurrently with writes of new versions.
class BenchmarkStore {
public:
    explicit BenchmarkStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }

    struct Entry {
        std::string name;
        std::string version;
        std::filesystem::path path;
    };

    /// Persists a new version; returns the saved benchmark with its version
    /// assigned. Throws VersionCollision if the computed version already
    /// exists, and InvalidName for names unusable as file stems.
    DemographicBenchmark save(const DemographicBenchmark& benchmark);

    /// Loads by name, latest version when `version` is empty.
    DemographicBenchmark load(const std::string& name, const std::string& version = "") const;

    /// All stored versions in chronological (= version) order, optionally
    /// filtered by name.
    std::vector<Entry> list(const std::string& name = "") const;

private:
    std::filesystem::path dir_;
};

}  // namespace demobench
