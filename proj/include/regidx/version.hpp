#pragma once

namespace regidx {
inline constexpr const char* kVersion = "0.1.0";
}
