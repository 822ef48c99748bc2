#pragma once

#include <string>

namespace seccorpus {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

// Level comes from the SECCORPUS_LOG env var (debug|info|warn|error|off),
// default info. Messages go to stderr.
LogLevel log_level();
void set_log_level(LogLevel level);
void log(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& msg) { log(LogLevel::debug, msg); }
inline void log_info(const std::string& msg) { log(LogLevel::info, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::warn, msg); }
inline void log_error(const std::string& msg) { log(LogLevel::error, msg); }

}  // namespace seccorpus
