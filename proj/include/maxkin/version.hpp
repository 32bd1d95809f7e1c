#pragma once

namespace maxkin {

inline constexpr const char* kVersion = "maxkin 0.1.0";

}  // namespace maxkin
