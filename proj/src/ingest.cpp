#include "demobench/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "demobench/detail/csv.hpp"
#include "demobench/detail/hash.hpp"
#include "demobench/detail/time.hpp"
#include "demobench/errors.hpp"

namespace demobench {

using detail::CsvTable;
using ordered_json = nlohmann::ordered_json;

namespace {

// Maps each schema attribute to its column index; remaining header columns
// are returned through `extra` in header order.
std::vector<std::size_t> map_attribute_columns(const CsvTable& table,
                                               const AttributeSchema& schema,
                                               std::vector<std::pair<std::string, std::size_t>>& extra) {
    std::vector<std::size_t> attr_cols(schema.attribute_count(), SIZE_MAX);
    for (std::size_t col = 0; col < table.header.size(); ++col) {
        const std::string& name = table.header[col];
        bool matched = false;
        for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
            if (schema.attributes()[a].name == name) {
                if (attr_cols[a] != SIZE_MAX) {
                    fail(errc::parse_error, "header lists attribute column '" + name + "' twice");
                }
                attr_cols[a] = col;
                matched = true;
                break;
            }
        }
        if (!matched) extra.emplace_back(name, col);
    }
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
        if (attr_cols[a] == SIZE_MAX) {
            fail(errc::parse_error,
                 "header is missing attribute column '" + schema.attributes()[a].name + "'");
        }
    }
    return attr_cols;
}

void check_row_width(const detail::CsvRow& row, std::size_t expected) {
    if (row.fields.size() != expected) {
        fail(errc::parse_error, "line " + std::to_string(row.line) + ": expected " +
                                    std::to_string(expected) + " fields, got " +
                                    std::to_string(row.fields.size()));
    }
}

GroupKey row_group(const detail::CsvRow& row,
                   const AttributeSchema& schema,
                   const std::vector<std::size_t>& attr_cols) {
    std::vector<std::string> values(schema.attribute_count());
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
        values[a] = row.fields[attr_cols[a]];
    }
    try {
        return schema.key(values);
    } catch (const AuditError& e) {
        if (e.code() == errc::unknown_attribute_value) {
            fail(errc::unknown_attribute_value,
                 "line " + std::to_string(row.line) + ": " + e.what());
        }
        throw;
    }
}

std::optional<TimeWindow> window_from_metadata(const CsvTable& table) {
    auto it = table.metadata.find("window");
    if (it == table.metadata.end()) return std::nullopt;
    std::string spec = it->second;
    std::replace(spec.begin(), spec.end(), '/', ' ');
    std::istringstream in(spec);
    std::string start, end;
    if (!(in >> start >> end)) {
        fail(errc::parse_error, "window metadata needs two timestamps: '" + it->second + "'");
    }
    return TimeWindow{detail::parse_iso8601(start), detail::parse_iso8601(end)};
}

AttributeSchema schema_from_json(const ordered_json& j) {
    if (!j.contains("attributes") || !j["attributes"].is_array()) {
        fail(errc::parse_error, "structured schema needs an 'attributes' array");
    }
    std::vector<Attribute> attrs;
    for (const auto& a : j["attributes"]) {
        Attribute attr;
        attr.name = a.at("name").get<std::string>();
        for (const auto& v : a.at("values")) attr.values.push_back(v.get<std::string>());
        attrs.push_back(std::move(attr));
    }
    AliasMap aliases;
    if (j.contains("aliases")) {
        for (const auto& [attr_name, mapping] : j["aliases"].items()) {
            for (const auto& [from, to] : mapping.items()) {
                aliases[attr_name][from] = to.get<std::string>();
            }
        }
    }
    return AttributeSchema(std::move(attrs), std::move(aliases));
}

ordered_json schema_to_json(const AttributeSchema& schema) {
    ordered_json attrs = ordered_json::array();
    for (const auto& attr : schema.attributes()) {
        attrs.push_back({{"name", attr.name}, {"values", attr.values}});
    }
    return ordered_json{{"attributes", std::move(attrs)}};
}

}  // namespace

AttributeSchema load_schema(const std::string& content) {
    ordered_json j;
    try {
        j = ordered_json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, std::string("invalid schema file: ") + e.what());
    }
    return schema_from_json(j);
}

BenchmarkFormat parse_benchmark_format(const std::string& text) {
    if (text == "delimited" || text == "delimited-table") return BenchmarkFormat::delimited_table;
    if (text == "structured" || text == "structured-object") return BenchmarkFormat::structured_object;
    fail(errc::invalid_config, "unknown benchmark format '" + text + "'");
}

DemographicBenchmark load_benchmark_delimited(const std::string& content,
                                              const AttributeSchema& schema,
                                              const std::string& name,
                                              const std::string& source_name) {
    CsvTable table = detail::parse_csv(content);
    if (table.header.empty()) {
        fail(errc::parse_error, "benchmark file has no header row");
    }
    std::vector<std::pair<std::string, std::size_t>> extra;
    auto attr_cols = map_attribute_columns(table, schema, extra);
    if (extra.size() != 1 || (extra[0].first != "count" && extra[0].first != "percent")) {
        fail(errc::parse_error,
             "benchmark header needs exactly one 'count' or 'percent' column after the attributes");
    }
    const bool percent = extra[0].first == "percent";
    const std::size_t value_col = extra[0].second;

    std::map<GroupKey, double> raw;
    for (const auto& row : table.rows) {
        check_row_width(row, table.header.size());
        GroupKey key = row_group(row, schema, attr_cols);
        double value = detail::parse_double(row.fields[value_col], row.line);
        if (value < 0.0) {
            fail(errc::negative_input,
                 "line " + std::to_string(row.line) + ": negative value " + row.fields[value_col]);
        }
        if (!raw.emplace(key, value).second) {
            fail(errc::duplicate_group,
                 "line " + std::to_string(row.line) + ": group '" + schema.group_label(key) +
                     "' appears more than once");
        }
    }
    if (raw.empty()) {
        fail(errc::parse_error, "benchmark file has no data rows");
    }

    std::string provenance = "source=" + source_name + " digest=fnv1a:" +
                             detail::fnv1a_hex(content) + " kind=" +
                             (percent ? "percent" : "count") + " rows=" +
                             std::to_string(raw.size());
    auto meta = table.metadata.find("source");
    if (meta != table.metadata.end()) {
        provenance += " note=" + meta->second;
    }
    return normalize_benchmark(schema, raw, percent ? RawKind::percentages : RawKind::counts,
                               name, provenance);
}

DemographicBenchmark load_benchmark_structured(const std::string& content,
                                               const std::optional<AttributeSchema>& expected_schema,
                                               const std::string& source_name) {
    ordered_json j;
    try {
        j = ordered_json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, std::string("invalid structured benchmark: ") + e.what());
    }
    if (!j.is_object() || !j.contains("name") || !j.contains("schema") || !j.contains("entries")) {
        fail(errc::parse_error, "structured benchmark needs name, schema, and entries");
    }
    AttributeSchema schema = schema_from_json(j["schema"]);
    if (expected_schema && !expected_schema->same_definition(schema)) {
        fail(errc::schema_mismatch,
             "structured benchmark schema differs from the expected schema");
    }

    std::map<GroupKey, double> raw;
    std::map<GroupKey, double> raw_inputs;
    bool has_raw_inputs = false;
    for (const auto& entry : j["entries"]) {
        std::vector<std::string> values;
        for (const auto& v : entry.at("values")) values.push_back(v.get<std::string>());
        GroupKey key = schema.key(values);
        double p = entry.at("proportion").get<double>();
        if (p < 0.0) {
            fail(errc::negative_input, "structured benchmark has a negative proportion");
        }
        if (!raw.emplace(key, p).second) {
            fail(errc::duplicate_group,
                 "structured benchmark lists group '" + schema.group_label(key) + "' twice");
        }
        if (entry.contains("raw")) {
            raw_inputs[key] = entry["raw"].get<double>();
            has_raw_inputs = true;
        }
    }
    std::string provenance = j.value("provenance", std::string{});
    if (provenance.empty()) {
        provenance = "source=" + source_name + " digest=fnv1a:" + detail::fnv1a_hex(content);
    }
    DemographicBenchmark benchmark = normalize_benchmark(
        schema, raw, RawKind::proportions, j["name"].get<std::string>(), provenance);
    benchmark.version = j.value("version", std::string{});
    if (has_raw_inputs) benchmark.raw = std::move(raw_inputs);
    return benchmark;
}

DemographicBenchmark load_benchmark(const std::string& content,
                                    BenchmarkFormat format,
                                    const std::optional<AttributeSchema>& schema,
                                    const std::string& name,
                                    const std::string& source_name) {
    if (format == BenchmarkFormat::delimited_table) {
        if (!schema) {
            fail(errc::invalid_config, "delimited benchmarks need a schema");
        }
        return load_benchmark_delimited(content, *schema, name, source_name);
    }
    return load_benchmark_structured(content, schema, source_name);
}

std::string save_benchmark_content(const DemographicBenchmark& benchmark) {
    ordered_json j;
    j["kind"] = "demobench.benchmark";
    j["name"] = benchmark.name;
    j["version"] = benchmark.version;
    j["provenance"] = benchmark.provenance;
    j["schema"] = schema_to_json(benchmark.schema);
    ordered_json entries = ordered_json::array();
    for (const auto& [key, p] : benchmark.entries) {
        ordered_json entry;
        ordered_json values = ordered_json::array();
        for (std::size_t a = 0; a < benchmark.schema.attribute_count(); ++a) {
            values.push_back(benchmark.schema.value_of(key, a));
        }
        entry["values"] = std::move(values);
        entry["proportion"] = p;
        auto raw_it = benchmark.raw.find(key);
        if (raw_it != benchmark.raw.end()) entry["raw"] = raw_it->second;
        entries.push_back(std::move(entry));
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

RecordLoadResult load_records(const std::string& content,
                              const AttributeSchema& schema,
                              const std::string& label,
                              Phase phase) {
    CsvTable table = detail::parse_csv(content);
    if (table.header.empty()) {
        fail(errc::empty_cohort, "record file is empty");
    }
    std::vector<std::pair<std::string, std::size_t>> extra;
    auto attr_cols = map_attribute_columns(table, schema, extra);

    std::size_t decision_col = SIZE_MAX, label_col = SIZE_MAX, timestamp_col = SIZE_MAX;
    for (const auto& [name, col] : extra) {
        if (name == "decision") decision_col = col;
        else if (name == "label") label_col = col;
        else if (name == "timestamp") timestamp_col = col;
        else fail(errc::parse_error, "unexpected column '" + name + "' in record file header");
    }
    if (decision_col == SIZE_MAX) {
        fail(errc::parse_error, "record file header is missing the 'decision' column");
    }
    const bool labeled = label_col != SIZE_MAX;

    auto parse_bit = [](const std::string& field, int line, const char* what) -> int {
        if (field == "0") return 0;
        if (field == "1") return 1;
        fail(errc::parse_error, "line " + std::to_string(line) + ": " + std::string(what) +
                                    " must be 0 or 1, got '" + field + "'");
    };

    std::map<GroupKey, GroupCounts> groups;
    std::int64_t rejected = 0;
    std::optional<std::int64_t> min_ts, max_ts;
    for (const auto& row : table.rows) {
        check_row_width(row, table.header.size());
        bool missing_attr = false;
        for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
            if (detail::trim(row.fields[attr_cols[a]]).empty()) missing_attr = true;
        }
        if (missing_attr) {
            // rejected, never imputed; the count is surfaced in reports
            ++rejected;
            continue;
        }
        GroupKey key = row_group(row, schema, attr_cols);
        int decision = parse_bit(row.fields[decision_col], row.line, "decision");
        GroupCounts& counts = groups[key];
        counts.total += 1;
        counts.positive += decision;
        if (labeled) {
            const std::string& field = row.fields[label_col];
            if (field.empty()) {
                fail(errc::mixed_labels,
                     "line " + std::to_string(row.line) +
                         ": record without a label in a labeled file (labels are all-or-nothing)");
            }
            int truth = parse_bit(field, row.line, "label");
            if (!counts.confusion) counts.confusion = Confusion{};
            Confusion& c = *counts.confusion;
            if (decision == 1 && truth == 1) c.tp += 1;
            else if (decision == 1 && truth == 0) c.fp += 1;
            else if (decision == 0 && truth == 1) c.fn += 1;
            else c.tn += 1;
        }
        if (timestamp_col != SIZE_MAX && !row.fields[timestamp_col].empty()) {
            std::int64_t ts = detail::parse_iso8601(row.fields[timestamp_col]);
            min_ts = min_ts ? std::min(*min_ts, ts) : ts;
            max_ts = max_ts ? std::max(*max_ts, ts) : ts;
        }
    }
    if (groups.empty()) {
        fail(errc::empty_cohort, "record file contains no usable records");
    }

    std::optional<TimeWindow> window = window_from_metadata(table);
    if (!window && min_ts) {
        window = TimeWindow{*min_ts, *max_ts};
    }
    ObservedCohort cohort(label, phase, schema, std::move(groups), window);
    cohort.set_rejected_records(rejected);
    cohort.set_source_digest("fnv1a:" + detail::fnv1a_hex(content));
    return RecordLoadResult{std::move(cohort), rejected};
}

ObservedCohort load_aggregate_audit(const std::string& content,
                                    const AttributeSchema& schema,
                                    const std::string& label,
                                    Phase phase) {
    CsvTable table = detail::parse_csv(content);
    if (table.header.empty()) {
        fail(errc::empty_cohort, "aggregate file is empty");
    }
    std::vector<std::pair<std::string, std::size_t>> extra;
    auto attr_cols = map_attribute_columns(table, schema, extra);

    std::size_t total_col = SIZE_MAX, positive_col = SIZE_MAX;
    std::size_t tp_col = SIZE_MAX, fp_col = SIZE_MAX, fn_col = SIZE_MAX, tn_col = SIZE_MAX;
    for (const auto& [name, col] : extra) {
        if (name == "total") total_col = col;
        else if (name == "positive") positive_col = col;
        else if (name == "tp") tp_col = col;
        else if (name == "fp") fp_col = col;
        else if (name == "fn") fn_col = col;
        else if (name == "tn") tn_col = col;
        else fail(errc::parse_error, "unexpected column '" + name + "' in aggregate file header");
    }
    if (total_col == SIZE_MAX || positive_col == SIZE_MAX) {
        fail(errc::parse_error, "aggregate header needs 'total' and 'positive' columns");
    }
    const bool has_confusion = tp_col != SIZE_MAX;
    if (has_confusion && (fp_col == SIZE_MAX || fn_col == SIZE_MAX || tn_col == SIZE_MAX)) {
        fail(errc::parse_error, "confusion columns must appear together: tp,fp,fn,tn");
    }

    std::map<GroupKey, GroupCounts> groups;
    for (const auto& row : table.rows) {
        check_row_width(row, table.header.size());
        GroupKey key = row_group(row, schema, attr_cols);
        GroupCounts counts;
        counts.total = detail::parse_int(row.fields[total_col], row.line);
        counts.positive = detail::parse_int(row.fields[positive_col], row.line);
        if (counts.total < 0 || counts.positive < 0) {
            fail(errc::count_inconsistency, "line " + std::to_string(row.line) + ": negative count");
        }
        if (counts.positive > counts.total) {
            fail(errc::count_inconsistency,
                 "line " + std::to_string(row.line) + ": positive (" +
                     std::to_string(counts.positive) + ") exceeds total (" +
                     std::to_string(counts.total) + ")");
        }
        if (has_confusion) {
            Confusion c;
            c.tp = detail::parse_int(row.fields[tp_col], row.line);
            c.fp = detail::parse_int(row.fields[fp_col], row.line);
            c.fn = detail::parse_int(row.fields[fn_col], row.line);
            c.tn = detail::parse_int(row.fields[tn_col], row.line);
            if (c.tp + c.fp + c.fn + c.tn != counts.total) {
                fail(errc::count_inconsistency,
                     "line " + std::to_string(row.line) + ": tp+fp+fn+tn != total");
            }
            if (c.tp + c.fp != counts.positive) {
                fail(errc::count_inconsistency,
                     "line " + std::to_string(row.line) + ": tp+fp != positive");
            }
            counts.confusion = c;
        }
        if (!groups.emplace(key, counts).second) {
            fail(errc::duplicate_group,
                 "line " + std::to_string(row.line) + ": group '" + schema.group_label(key) +
                     "' appears more than once");
        }
    }
    if (groups.empty()) {
        fail(errc::empty_cohort, "aggregate file contains no rows");
    }

    ObservedCohort cohort(label, phase, schema, std::move(groups), window_from_metadata(table));
    cohort.set_source_digest("fnv1a:" + detail::fnv1a_hex(content));
    return cohort;
}

// --- benchmark store ---------------------------------------------------------

namespace {

bool valid_store_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

std::string read_file_or_fail(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(errc::io_error, "cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

BenchmarkStore::BenchmarkStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
        fail(errc::io_error, "cannot create store directory '" + dir_.string() + "'");
    }
}

std::vector<BenchmarkStore::Entry> BenchmarkStore::list(const std::string& name) const {
    std::vector<Entry> entries;
    for (const auto& item : std::filesystem::directory_iterator(dir_)) {
        if (!item.is_regular_file() || item.path().extension() != ".json") continue;
        std::string stem = item.path().stem().string();
        std::size_t dash = stem.rfind("-v");
        if (dash == std::string::npos) continue;
        Entry entry;
        entry.name = stem.substr(0, dash);
        entry.version = stem.substr(dash + 1);
        entry.path = item.path();
        if (!name.empty() && entry.name != name) continue;
        entries.push_back(std::move(entry));
    }
    // zero-padded versions make lexical order chronological
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.name, a.version) < std::tie(b.name, b.version);
    });
    return entries;
}

DemographicBenchmark BenchmarkStore::save(const DemographicBenchmark& benchmark) {
    if (!valid_store_name(benchmark.name)) {
        fail(errc::invalid_name,
             "benchmark name '" + benchmark.name + "' (use letters, digits, '._-')");
    }
    validate_benchmark(benchmark);
    auto existing = list(benchmark.name);
    int next = 1;
    if (!existing.empty()) {
        next = std::stoi(existing.back().version.substr(1)) + 1;
    }
    char version[12];
    std::snprintf(version, sizeof(version), "v%04d", next);

    DemographicBenchmark saved = benchmark;
    saved.version = version;
    std::filesystem::path path = dir_ / (benchmark.name + "-" + version + ".json");
    if (std::filesystem::exists(path)) {
        fail(errc::version_collision, "store already contains '" + path.string() + "'");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(errc::io_error, "cannot write '" + path.string() + "'");
    }
    out << save_benchmark_content(saved);
    out.close();
    if (!out) {
        fail(errc::io_error, "failed writing '" + path.string() + "'");
    }
    return saved;
}

DemographicBenchmark BenchmarkStore::load(const std::string& name, const std::string& version) const {
    auto entries = list(name);
    if (entries.empty()) {
        fail(errc::io_error, "no benchmark named '" + name + "' in store '" + dir_.string() + "'");
    }
    const Entry* chosen = nullptr;
    if (version.empty()) {
        chosen = &entries.back();
    } else {
        for (const auto& entry : entries) {
            if (entry.version == version) chosen = &entry;
        }
        if (!chosen) {
            fail(errc::io_error,
                 "benchmark '" + name + "' has no version '" + version + "'");
        }
    }
    return load_benchmark_structured(read_file_or_fail(chosen->path), std::nullopt,
                                     chosen->path.filename().string());
}

}  // namespace demobench
