#pragma once

namespace epsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace epsim
