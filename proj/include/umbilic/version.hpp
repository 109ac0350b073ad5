#pragma once

namespace umbilic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace umbilic
