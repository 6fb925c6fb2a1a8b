#pragma once

namespace momentforge {

inline constexpr const char* kToolName = "moment-forge";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace momentforge
