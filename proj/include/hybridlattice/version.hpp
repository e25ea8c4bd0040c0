#pragma once

namespace hybridlattice {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace hybridlattice
