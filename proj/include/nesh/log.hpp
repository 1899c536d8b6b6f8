#pragma once
// Minimal stderr logging gated by the NESH_LOG environment variable.
// Levels: quiet < warn (default) < info < debug.

namespace nesh {

enum class LogLevel { kQuiet = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Parsed once from NESH_LOG ("quiet", "warn", "info", "debug"); unknown or
// unset values fall back to warn.
LogLevel log_level();

bool log_enabled(LogLevel level);

// printf-style; a newline is appended.
void logf(LogLevel level, const char* fmt, ...);

}  // namespace nesh
