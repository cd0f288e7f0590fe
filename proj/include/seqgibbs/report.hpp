#pragma once

#include <json.hpp>
#include <string>

#include "seqgibbs/calibration.hpp"

namespace seqgibbs {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Log level read from SEQGIBBS_LOG (error|warn|info|debug); diagnostics
/// go to standard error only.
enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };
LogLevel log_level();
void log_message(LogLevel level, const std::string& message);
inline void log_info(const std::string& m) { log_message(LogLevel::kInfo, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::kWarn, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::kDebug, m); }

nlohmann::json coverage_report_to_json(const CoverageReport& report);
nlohmann::json trace_to_json(const CalibrationTrace& trace);

/// Assembles the versioned run report. Everything a rerun must
/// reproduce byte-identically lives under "payload"; wall-clock and
/// other environment facts stay outside it.
nlohmann::json make_run_report(const std::string& command,
                               const nlohmann::json& config_echo,
                               const nlohmann::json& payload,
                               double wall_clock_seconds);

void write_json(const std::string& path, const nlohmann::json& value);

}  // namespace seqgibbs
