#pragma once

namespace rgsc {
inline constexpr const char* kToolName = "rgsc";
inline constexpr const char* kVersion = "1.0.0";
}  // namespace rgsc
