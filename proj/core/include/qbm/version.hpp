#pragma once

namespace qbm {
inline constexpr const char* kVersion = "0.1.0";
}
