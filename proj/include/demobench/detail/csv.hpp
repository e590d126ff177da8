#pragma once

#include <map>
#include <string>
#include <vector>

namespace demobench::detail {

// Minimal delimited-table reader for the toolkit's file formats.
//
//   - comma separated, UTF-8; surrounding whitespace per field is trimmed
//   - '#' lines are comments; "# key: value" comments become metadata
//   - double-quoted fields may contain commas; "" is an escaped quote
//   - blank lines ignored
struct CsvRow {
    int line = 0;  // 1-based line number in the source text
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
    std::map<std::string, std::string> metadata;
};

CsvTable parse_csv(const std::string& content);

std::string trim(const std::string& s);

// Strict numeric parsers; throw AuditError(parse_error) naming the line.
double parse_double(const std::string& field, int line);
std::int64_t parse_int(const std::string& field, int line);

}  // namespace demobench::detail
