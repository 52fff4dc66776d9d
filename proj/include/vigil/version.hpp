#pragma once

namespace vigil {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vigil
