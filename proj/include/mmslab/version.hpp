#pragma once

namespace mmslab {

inline constexpr const char* kToolName = "mmslab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace mmslab
