#pragma once

namespace tmsvbell {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tmsvbell
