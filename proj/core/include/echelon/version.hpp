#pragma once

namespace echelon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace echelon
