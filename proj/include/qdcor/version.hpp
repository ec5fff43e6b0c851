#pragma once

namespace qdcor {
inline constexpr const char* kVersion = "0.1.0";
}
