#pragma once

#include <string_view>

#include <spdlog/logger.h>

namespace textshield {

/// Library logger writing to standard error. Its level starts from the
/// TEXTSHIELD_LOG environment variable (default "warn").
spdlog::logger& logger();

/// Accepts trace, debug, info, warn, error, off. Returns false otherwise.
bool set_log_level(std::string_view level);

}  // namespace textshield
