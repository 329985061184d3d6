#pragma once

namespace dmisac {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "dmisac";

}  // namespace dmisac
