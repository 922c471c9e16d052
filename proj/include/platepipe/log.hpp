#pragma once

#include <string>

namespace platepipe {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Level read once from PLATE_PIPELINE_LOG (error|warn|info|debug),
/// defaulting to warn. All log output goes to stderr; stdout stays reserved
/// for machine-parseable results.
LogLevel log_level();

void log_message(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log_message(LogLevel::error, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::warn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::info, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::debug, m); }

}  // namespace platepipe
