#include "textshield/log.hpp"

#include <cstdlib>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace textshield {

namespace {

std::shared_ptr<spdlog::logger> make_logger() {
  auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
  auto log = std::make_shared<spdlog::logger>("textshield", sink);
  log->set_pattern("textshield: %l: %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TEXTSHIELD_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour real names.
    if (level != spdlog::level::off || std::string(env) == "off") log->set_level(level);
  }
  return log;
}

}  // namespace

spdlog::logger& logger() {
  static const std::shared_ptr<spdlog::logger> instance = make_logger();
  return *instance;
}

bool set_log_level(std::string_view level) {
  for (const char* name : {"trace", "debug", "info", "warn", "error", "off"}) {
    if (level == name) {
      logger().set_level(spdlog::level::from_str(name));
      return true;
    }
  }
  return false;
}

}  // namespace textshield
