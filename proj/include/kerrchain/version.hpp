#pragma once

namespace kerrchain {
inline constexpr const char* kVersion = "1.0.0";
}
