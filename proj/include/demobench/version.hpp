#pragma once

namespace demobench {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchemaVersion = "1";

}  // namespace demobench
