#include "seqgibbs/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "seqgibbs/errors.hpp"

namespace seqgibbs {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SEQGIBBS_LOG");
    if (!env) return LogLevel::kWarn;
    const std::string v(env);
    if (v == "error") return LogLevel::kError;
    if (v == "warn") return LogLevel::kWarn;
    if (v == "info") return LogLevel::kInfo;
    if (v == "debug") return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& message) {
  if (level > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], message.c_str());
}

nlohmann::json coverage_report_to_json(const CoverageReport& report) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : report.parameters) {
    params.push_back({{"name", p.name},
                      {"coverage", p.coverage},
                      {"std_error", p.std_error},
                      {"mean_radius", p.mean_radius},
                      {"replicates", p.replicates}});
  }
  return {{"generator", report.generator},
          {"method", report.method},
          {"n", report.n},
          {"p", report.p},
          {"replicates", report.replicates},
          {"seed", report.seed},
          {"parameters", params}};
}

nlohmann::json trace_to_json(const CalibrationTrace& trace) {
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& it : trace.iterations) {
    iters.push_back({{"t", it.t},
                     {"eta", it.eta},
                     {"credible_radius", it.credible_radius},
                     {"relative_error", it.relative_error}});
  }
  return {{"iterations", iters},
          {"termination_reason", to_string(trace.reason)},
          {"eta_final", trace.eta_final},
          {"boundary_hit", trace.boundary_hit}};
}

nlohmann::json make_run_report(const std::string& command,
                               const nlohmann::json& config_echo,
                               const nlohmann::json& payload,
                               double wall_clock_seconds) {
  return {{"schema_version", kReportSchemaVersion},
          {"library_version", kLibraryVersion},
          {"command", command},
          {"config", config_echo},
          {"wall_clock_seconds", wall_clock_seconds},
          {"payload", payload}};
}

void write_json(const std::string& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << value.dump(2) << '\n';
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace seqgibbs
