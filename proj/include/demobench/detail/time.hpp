#pragma once

#include <cstdint>
#include <string>

namespace demobench::detail {

// Seconds since the Unix epoch, UTC. Accepts "YYYY-MM-DDTHH:MM:SSZ" and the
// date-only form "YYYY-MM-DD"; throws AuditError(parse_error) otherwise.
std::int64_t parse_iso8601(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t epoch_seconds);

// Current wall-clock time formatted as above.
std::string now_iso8601();

}  // namespace demobench::detail
