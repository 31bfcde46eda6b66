#pragma once

#include <functional>
#include <string>

namespace tensorlev {

enum class LogLevel { Info, Warning };

using LogSink = std::function<void(LogLevel, const std::string&)>;

/// Replaces the process-wide sink (default: warnings to stderr, info dropped).
/// Pass an empty function to silence everything.
void set_log_sink(LogSink sink);
void log_message(LogLevel level, const std::string& message);

}  // namespace tensorlev
