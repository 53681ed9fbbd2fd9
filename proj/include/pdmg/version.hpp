#pragma once

namespace pdmg {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace pdmg
