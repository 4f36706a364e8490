#pragma once

namespace cascade {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace cascade
