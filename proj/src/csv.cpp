#include "demobench/detail/csv.hpp"

#include <charconv>

#include "demobench/errors.hpp"

namespace demobench::detail {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

namespace {

std::vector<std::string> split_fields(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        fail(errc::parse_error, "line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(trim(cur));
    return fields;
}

}  // namespace

CsvTable parse_csv(const std::string& content) {
    CsvTable table;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= content.size()) {
        std::size_t nl = content.find('\n', pos);
        std::string line = content.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = (nl == std::string::npos) ? content.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped[0] == '#') {
            // "# key: value" comments become metadata
            std::string body = trim(stripped.substr(1));
            std::size_t colon = body.find(':');
            if (colon != std::string::npos) {
                std::string key = trim(body.substr(0, colon));
                std::string value = trim(body.substr(colon + 1));
                if (!key.empty() && key.find(' ') == std::string::npos) {
                    table.metadata[key] = value;
                }
            }
            continue;
        }
        auto fields = split_fields(line, line_no);
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            table.rows.push_back(CsvRow{line_no, std::move(fields)});
        }
    }
    return table;
}

double parse_double(const std::string& field, int line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        fail(errc::parse_error,
             "line " + std::to_string(line) + ": expected a number, got '" + field + "'");
    }
    return value;
}

std::int64_t parse_int(const std::string& field, int line) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        fail(errc::parse_error,
             "line " + std::to_string(line) + ": expected an integer, got '" + field + "'");
    }
    return value;
}

}  // namespace demobench::detail
