#include "tensorlev/log.hpp"

#include <iostream>
#include <mutex>

namespace tensorlev {

namespace {

std::mutex g_mu;

LogSink& sink() {
  static LogSink s = [](LogLevel level, const std::string& msg) {
    if (level == LogLevel::Warning) std::cerr << "tensorlev: warning: " << msg << '\n';
  };
  return s;
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(g_mu);
  sink() = std::move(s);
}

void log_message(LogLevel level, const std::string& message) {
  std::lock_guard lock(g_mu);
  if (sink()) sink()(level, message);
}

}  // namespace tensorlev
