#include "platepipe/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace platepipe {

namespace {

LogLevel parse_level(const char* value) {
  if (!value) return LogLevel::warn;
  std::string v(value);
  if (v == "error") return LogLevel::error;
  if (v == "warn") return LogLevel::warn;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "?";
}

std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level(std::getenv("PLATE_PIPELINE_LOG"));
  return level;
}

void log_message(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::lock_guard<std::mutex> lock(log_mutex());
  std::cerr << "[platepipe] " << level_name(level) << ": " << message << "\n";
}

}  // namespace platepipe
