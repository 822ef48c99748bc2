#include "seccorpus/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace seccorpus {

namespace {

LogLevel parse_env_level() {
    const char* v = std::getenv("SECCORPUS_LOG");
    if (v == nullptr) return LogLevel::info;
    if (std::strcmp(v, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(v, "info") == 0) return LogLevel::info;
    if (std::strcmp(v, "warn") == 0) return LogLevel::warn;
    if (std::strcmp(v, "error") == 0) return LogLevel::error;
    if (std::strcmp(v, "off") == 0) return LogLevel::off;
    return LogLevel::info;
}

LogLevel g_level = parse_env_level();
std::mutex g_mutex;

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::debug: return "debug";
        case LogLevel::info: return "info";
        case LogLevel::warn: return "warn";
        case LogLevel::error: return "error";
        default: return "?";
    }
}

}  // namespace

LogLevel log_level() { return g_level; }

void set_log_level(LogLevel level) { g_level = level; }

void log(LogLevel level, const std::string& msg) {
    if (level < g_level) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[seccorpus %s] %s\n", level_tag(level), msg.c_str());
}

}  // namespace seccorpus
