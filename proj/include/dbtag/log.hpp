#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace dbtag {

/// Stderr logging, gated by the DBTAG_LOG environment variable
/// (error|warn|info|debug); stdout stays a clean data channel.
enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel log_threshold() {
  static LogLevel level = [] {
    const char* env = std::getenv("DBTAG_LOG");
    if (!env) return LogLevel::Warn;
    std::string_view s(env);
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

inline void log_msg(LogLevel level, std::string_view msg) {
  if (level > log_threshold()) return;
  static std::mutex mu;
  static constexpr std::string_view names[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "dbtag [" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

inline void log_error(std::string_view msg) { log_msg(LogLevel::Error, msg); }
inline void log_warn(std::string_view msg) { log_msg(LogLevel::Warn, msg); }
inline void log_info(std::string_view msg) { log_msg(LogLevel::Info, msg); }
inline void log_debug(std::string_view msg) { log_msg(LogLevel::Debug, msg); }

}  // namespace dbtag
