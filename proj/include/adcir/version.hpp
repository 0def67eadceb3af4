#pragma once

namespace adcir {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace adcir
