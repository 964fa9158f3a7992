#pragma once

namespace setidet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace setidet
