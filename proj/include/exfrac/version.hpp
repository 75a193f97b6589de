#pragma once

namespace exfrac {

inline constexpr const char* kToolName = "exfrac";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace exfrac
