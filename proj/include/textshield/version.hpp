#pragma once

namespace textshield {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace textshield
