#pragma once

namespace dlamps {

inline constexpr const char* kToolName = "dlamps";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dlamps
