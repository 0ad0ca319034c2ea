#pragma once

namespace steerjm {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace steerjm
