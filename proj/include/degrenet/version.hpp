#pragma once

namespace degrenet {

inline constexpr const char* kToolName = "degrenet";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace degrenet
