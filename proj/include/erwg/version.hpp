#pragma once

namespace erwg {
inline constexpr const char* kVersion = "0.1.0";
}
