#pragma once

namespace sgflab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sgflab
