#include "nesh/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace nesh {

LogLevel log_level() {
  static const LogLevel cached = [] {
    const char* env = std::getenv("NESH_LOG");
    if (env == nullptr) return LogLevel::kWarn;
    if (std::strcmp(env, "quiet") == 0) return LogLevel::kQuiet;
    if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return cached;
}

bool log_enabled(LogLevel level) {
  return static_cast<int>(level) <= static_cast<int>(log_level());
}

void logf(LogLevel level, const char* fmt, ...) {
  if (!log_enabled(level)) return;
  static const char* const kTags[] = {"", "warn", "info", "debug"};
  std::fprintf(stderr, "[nesh:%s] ", kTags[static_cast<int>(level)]);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

}  // namespace nesh
