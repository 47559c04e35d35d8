#pragma once

namespace lifmoran {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lifmoran
