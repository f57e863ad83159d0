#pragma once

namespace vclab {
inline constexpr const char* kToolName = "vclab";
inline constexpr const char* kVersion = "0.1.0";
}  // namespace vclab
